#ifndef SMALLDIV_MAJORANTS_HPP
#define SMALLDIV_MAJORANTS_HPP

#include <smalldiv/rational.hpp>

#include <vector>

namespace smalldiv {

// sigma_1 = 1, sigma_n = sum_{j=2}^n sum_{n_1+...+n_j=n} sigma_{n_1}...sigma_{n_j}.
// The generating function solves 2 s^2 - (1+z) s + z = 0, which gives the
// O(N^2) form sigma_n = 2 sum_{i+j=n} sigma_i sigma_j - sigma_{n-1}.
// Index 0 unused; exact big integers.
inline std::vector<Int> sigma_majorant(size_t N) {
    if (N < 1) throw precondition_error("sigma_majorant needs N >= 1");
    std::vector<Int> s(N + 1, Int(0));
    s[1] = 1;
    for (size_t n = 2; n <= N; ++n) {
        Int conv(0);
        for (size_t i = 1; i < n; ++i) conv += s[i] * s[n - i];
        s[n] = 2 * conv - s[n - 1];
        if (s[n] <= 0) throw invariant_violation("sigma_n must stay positive");
    }
    return s;
}

// s_1 = 1, s_n = sum_{m=2}^n m sum_{n_1+...+n_m=n} s_{n_1}...s_{n_m};
// equivalently s = z + s^2(2-s)/(1-s)^2, i.e.
// 2 s^3 - (4+z) s^2 + (1+2z) s - z = 0, which unrolls to
// s_n = -2 [z^n]s^3 + 4 [z^n]s^2 + [z^{n-1}]s^2 - 2 s_{n-1}.
inline std::vector<Int> s_majorant(size_t N) {
    if (N < 1) throw precondition_error("s_majorant needs N >= 1");
    std::vector<Int> s(N + 1, Int(0)), s2(N + 1, Int(0)), s3(N + 1, Int(0));
    s[1] = 1;
    for (size_t n = 2; n <= N; ++n) {
        Int c2(0);
        for (size_t i = 1; i < n; ++i) c2 += s[i] * s[n - i];
        s2[n] = c2;
        Int c3(0);
        for (size_t i = 1; i + 1 < n; ++i) c3 += s[i] * s2[n - i];
        s3[n] = c3;
        s[n] = -2 * s3[n] + 4 * s2[n] + s2[n - 1] - 2 * s[n - 1];
        if (s[n] <= 0) throw invariant_violation("s_n must stay positive");
    }
    return s;
}

} // namespace smalldiv

#endif
