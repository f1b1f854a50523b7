#ifndef SMALLDIV_REPORT_HPP
#define SMALLDIV_REPORT_HPP

#include <string>
#include <vector>

namespace smalldiv {

// Outcome of a property sweep (lemma checks, bound checks, self tests).
struct CheckReport {
    std::string name;
    size_t checked = 0;
    std::vector<std::string> violations;
    std::vector<std::string> notes;

    bool passed() const { return violations.empty(); }
    void violation(std::string msg) { violations.push_back(std::move(msg)); }

    std::string summary() const {
        std::string s = name + ": " + (passed() ? "pass" : "FAIL") + " (" +
                        std::to_string(checked) + " checked";
        if (!passed()) s += ", " + std::to_string(violations.size()) + " violations";
        s += ")";
        return s;
    }
};

} // namespace smalldiv

#endif
