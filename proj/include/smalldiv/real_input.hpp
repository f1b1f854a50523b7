#ifndef SMALLDIV_REAL_INPUT_HPP
#define SMALLDIV_REAL_INPUT_HPP

#include <smalldiv/quadratic.hpp>
#include <smalldiv/rational.hpp>

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace smalldiv {

// One real number, in one of four certified representations:
//   - exact rational p/q
//   - exact quadratic surd (a + b sqrt(d))/c
//   - partial-quotient sequence (finite list, periodic tail, or generator)
//   - decimal string with declared precision (a rational interval)
// Floating-point continued-fraction expansion silently corrupts quotients,
// so nothing here ever passes through a double.
struct RealInput {
    struct RationalSpec {
        Rat value;
    };
    struct SurdSpec {
        QuadRat value;
    };
    struct QuotientSpec {
        Int a0;                      // integer part
        std::vector<Int> head;       // a_1, a_2, ... explicitly given
        std::vector<Int> period;     // repeated forever after head (may be empty)
        std::function<Int(size_t)> gen; // a_n for n >= 1 when period empty; may be null
        // quotient a_n, n >= 1; throws depth_error when the sequence is finite
        Int quotient(size_t n) const {
            if (n == 0) throw precondition_error("quotient index starts at 1");
            size_t i = n - 1;
            if (i < head.size()) return head[i];
            if (!period.empty()) return period[(i - head.size()) % period.size()];
            if (gen) return gen(n);
            throw depth_error("rational-terminated: quotient sequence exhausted");
        }
        bool is_finite() const { return period.empty() && !gen; }
        bool has_bounded_tail() const { return !period.empty(); }
    };
    struct DecimalSpec {
        Rat value;
        unsigned bits; // half-width of the certified enclosure is 2^-bits
        RatInterval interval() const {
            Int den = 1;
            mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
            Rat u(1, den);
            return RatInterval(value - u, value + u);
        }
    };

    std::variant<RationalSpec, SurdSpec, QuotientSpec, DecimalSpec> spec;
    std::string source; // the spec string this was parsed from, if any

    bool is_exact() const {
        return std::holds_alternative<RationalSpec>(spec) ||
               std::holds_alternative<SurdSpec>(spec);
    }

    static RealInput rational(Rat v) { return RealInput{RationalSpec{std::move(v)}, ""}; }
    static RealInput surd(QuadRat v) { return RealInput{SurdSpec{std::move(v)}, ""}; }
    static RealInput golden() {
        RealInput r = surd(golden_g());
        r.source = "surd:(-1+sqrt(5))/2";
        return r;
    }
    static RealInput sqrt2_minus_1() {
        RealInput r = surd(QuadRat(-1, 1, 1, 2));
        r.source = "surd:(-1+sqrt(2))/1";
        return r;
    }
    static RealInput quotients(Int a0, std::vector<Int> head, std::vector<Int> period = {}) {
        return RealInput{QuotientSpec{std::move(a0), std::move(head), std::move(period), nullptr}, ""};
    }
    static RealInput quotient_generator(Int a0, std::function<Int(size_t)> gen) {
        return RealInput{QuotientSpec{std::move(a0), {}, {}, std::move(gen)}, ""};
    }
    // e = [2; 1,2,1,1,4,1,1,6,...]: a_n = 2(n+1)/3 when n = 2 mod 3, else 1
    static RealInput euler_e() {
        RealInput r = quotient_generator(Int(2), [](size_t n) {
            if (n % 3 == 2) return Int(2 * ((n + 1) / 3));
            return Int(1);
        });
        r.source = "e";
        return r;
    }
    static RealInput decimal(Rat v, unsigned bits) {
        return RealInput{DecimalSpec{std::move(v), bits}, ""};
    }
};

namespace detail {

inline bool consume(const std::string& s, size_t& i, char c) {
    if (i < s.size() && s[i] == c) {
        ++i;
        return true;
    }
    return false;
}

inline Int parse_int(const std::string& s, size_t& i) {
    size_t start = i;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    size_t dstart = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == dstart)
        throw parse_error("expected integer in '" + s + "' at position " + std::to_string(start));
    Int v(s.substr(dstart, i - dstart), 10);
    return neg ? Int(-v) : v;
}

// "(a+b*sqrt(d))/c" with the b, c, and sign parts optional
inline QuadRat parse_surd_body(const std::string& s) {
    size_t i = 0;
    bool paren = consume(s, i, '(');
    Int a(0), b(0), d(0);
    // optional leading rational term, then +- b*sqrt(d)
    auto parse_term = [&](int sign_mult) {
        if (s.compare(i, 5, "sqrt(") == 0) {
            i += 5;
            d = parse_int(s, i);
            if (!consume(s, i, ')')) throw parse_error("expected ')' after sqrt arg");
            b += sign_mult;
            return;
        }
        Int v = parse_int(s, i);
        if (s.compare(i, 6, "*sqrt(") == 0) {
            i += 6;
            d = parse_int(s, i);
            if (!consume(s, i, ')')) throw parse_error("expected ')' after sqrt arg");
            b += v * sign_mult;
        } else {
            a += v * sign_mult;
        }
    };
    parse_term(1);
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        int sm = (s[i] == '+') ? 1 : -1;
        ++i;
        parse_term(sm);
    }
    if (paren && !consume(s, i, ')')) throw parse_error("expected closing ')'");
    Int c(1);
    if (consume(s, i, '/')) c = parse_int(s, i);
    if (i != s.size()) throw parse_error("trailing characters in surd spec '" + s + "'");
    if (d == 0) throw parse_error("surd spec has no sqrt term: '" + s + "'");
    return QuadRat(a, b, c, d);
}

// decimal literal -> exact rational
inline Rat parse_decimal_rat(const std::string& s) {
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    size_t frac_len = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) throw parse_error("two dots in decimal '" + s + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i];
            seen_digit = true;
            if (seen_dot) ++frac_len;
        } else {
            throw parse_error("bad character in decimal '" + s + "'");
        }
    }
    if (!seen_digit) throw parse_error("empty decimal '" + s + "'");
    Int num(digits.empty() ? std::string("0") : digits, 10);
    Int den(1);
    for (size_t k = 0; k < frac_len; ++k) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

} // namespace detail

// Input spec strings:
//   "surd:(-1+sqrt(5))/2"      quadratic surd
//   "rat:7/16"                 exact rational
//   "quot:0,1,1,1,..."         quotients; trailing ... repeats the last entry
//   "quot:0,2,(1,2)"           quotients with explicit periodic tail
//   "dec:0.7071067811@128bits" decimal with declared precision
//   "e", "golden"              named generators
inline RealInput parse_real_input(const std::string& spec) {
    if (spec == "e") return RealInput::euler_e();
    if (spec == "golden" || spec == "g") return RealInput::golden();
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw parse_error("unrecognized input spec '" + spec + "'");
    std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
    // tolerate unicode minus from copy-pasted docs
    std::string clean;
    for (size_t i = 0; i < body.size();) {
        if (body.compare(i, 3, "\xe2\x88\x92") == 0) {
            clean += '-';
            i += 3;
        } else {
            clean += body[i++];
        }
    }
    body = clean;
    if (kind == "surd") {
        RealInput r = RealInput::surd(detail::parse_surd_body(body));
        r.source = spec;
        return r;
    }
    if (kind == "rat") {
        Rat v(body);
        v.canonicalize();
        RealInput r = RealInput::rational(v);
        r.source = spec;
        return r;
    }
    if (kind == "dec") {
        auto at = body.find('@');
        if (at == std::string::npos) throw parse_error("dec spec needs '@<bits>bits'");
        std::string num = body.substr(0, at), prec = body.substr(at + 1);
        if (prec.size() > 4 && prec.substr(prec.size() - 4) == "bits") prec.resize(prec.size() - 4);
        unsigned bits = static_cast<unsigned>(std::stoul(prec));
        if (bits < 2) throw parse_error("dec precision too small");
        RealInput r = RealInput::decimal(detail::parse_decimal_rat(num), bits);
        r.source = spec;
        return r;
    }
    if (kind == "quot") {
        std::vector<Int> head, period;
        bool repeat_last = false, in_period = false;
        size_t i = 0;
        std::optional<Int> a0;
        while (i < body.size()) {
            if (body.compare(i, 3, "...") == 0) {
                repeat_last = true;
                i += 3;
                break;
            }
            if (body[i] == '(') {
                in_period = true;
                ++i;
                continue;
            }
            if (body[i] == ')') {
                ++i;
                continue;
            }
            if (body[i] == ',') {
                ++i;
                continue;
            }
            Int v = detail::parse_int(body, i);
            if (!a0)
                a0 = v;
            else if (in_period)
                period.push_back(v);
            else
                head.push_back(v);
        }
        if (!a0) throw parse_error("quot spec needs at least a_0");
        if (repeat_last) {
            if (head.empty()) throw parse_error("quot: '...' needs a preceding quotient");
            period.push_back(head.back());
            head.pop_back();
        }
        for (const Int& a : head)
            if (a < 1) throw parse_error("quotients a_n must be >= 1 for n >= 1");
        for (const Int& a : period)
            if (a < 1) throw parse_error("quotients a_n must be >= 1 for n >= 1");
        RealInput r = RealInput::quotients(*a0, std::move(head), std::move(period));
        r.source = spec;
        return r;
    }
    throw parse_error("unrecognized input kind '" + kind + "'");
}

} // namespace smalldiv

#endif
