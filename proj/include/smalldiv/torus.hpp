#ifndef SMALLDIV_TORUS_HPP
#define SMALLDIV_TORUS_HPP

#include <smalldiv/alpha_oracle.hpp>
#include <smalldiv/cplx.hpp>
#include <smalldiv/quadratic.hpp>
#include <smalldiv/report.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smalldiv {

// Frequency vector mu in R^n with exact entries in one real quadratic field
// (rationals embed with b = 0).  Certificates (gamma, tau) are finite-range:
// |mu . k| >= gamma |k|^{-tau} verified for 0 < |k|_1 <= k_checked.  The
// homogeneous condition only; the affine variant |mu.k + p| is out of scope.
struct FrequencyVector {
    std::vector<QuadRat> mu;
    std::optional<std::pair<Rat, Rat>> certificate; // (gamma, tau)
    long k_checked = 0;

    size_t dim() const { return mu.size(); }

    QuadRat dot(const std::vector<long>& k) const {
        if (k.size() != mu.size()) throw precondition_error("mode dimension mismatch");
        QuadRat acc = QuadRat::from_rat(Rat(0), mu.empty() ? Int(5) : mu[0].d);
        for (size_t i = 0; i < k.size(); ++i)
            if (k[i] != 0) acc = acc + mu[i] * Rat(Int(k[i]));
        return acc;
    }

    // Finite-range certification: gamma = min |mu.k| |k|^tau over
    // 0 < |k|_1 <= K.  Integer tau with dim 2 runs an exact O(K) scan
    // (minimizing k1 is the nearest integer to -k2 mu2/mu1); otherwise an
    // exhaustive enumeration bounded to small K.
    void certify(long K, const Rat& tau, unsigned prec = 128) {
        if (K < 1) throw precondition_error("certify needs K >= 1");
        bool tau_int = (tau.get_den() == 1) && tau >= 0;
        std::optional<QuadRat> best; // exact min of |mu.k| |k|^tau
        auto consider = [&](const std::vector<long>& k) {
            QuadRat t = dot(k);
            if (t.sign() == 0) throw resonant_error("resonant frequency vector: mu.k = 0");
            QuadRat at = (t.sign() < 0) ? -t : t;
            long knorm = 0;
            for (long v : k) knorm += std::labs(v);
            Int kn_pow = 1;
            mpz_pow_ui(kn_pow.get_mpz_t(), Int(knorm).get_mpz_t(), tau.get_num().get_ui());
            QuadRat cand = at * Rat(kn_pow);
            if (!best || cand < *best) best = cand;
        };
        if (tau_int && dim() == 2) {
            if (mu[0].sign() == 0) throw resonant_error("resonant frequency vector: mu_1 = 0");
            QuadRat ratio = mu[1] / mu[0];
            for (long k2 = 0; k2 <= K; ++k2) {
                if (k2 == 0) {
                    consider({1, 0});
                    continue;
                }
                QuadRat y = ratio * Rat(Int(k2));
                Int m = (y + Rat(1, 2)).floor();
                for (long dm = -1; dm <= 1; ++dm) {
                    Int k1 = -(m + dm);
                    if (!k1.fits_slong_p()) continue;
                    long k1l = k1.get_si();
                    if (std::labs(k1l) + k2 > K) continue;
                    consider({k1l, k2});
                }
                // boundary candidates of the restricted k1 range
                long cap = K - k2;
                consider({cap, k2});
                consider({-cap, k2});
            }
        } else {
            if (K > 64 && dim() > 2)
                throw precondition_error("certify: exhaustive scan capped at K = 64 for n > 2");
            std::vector<long> k(mu.size(), 0);
            std::function<void(size_t, long)> rec = [&](size_t pos, long budget) {
                if (pos == k.size()) {
                    for (long v : k)
                        if (v != 0) {
                            consider(k);
                            return;
                        }
                    return;
                }
                for (long v = -budget; v <= budget; ++v) {
                    k[pos] = v;
                    rec(pos + 1, budget - std::labs(v));
                }
                k[pos] = 0;
            };
            if (!tau_int)
                throw precondition_error("certify: non-integer tau not supported by the exact scan");
            rec(0, K);
        }
        if (!best) throw precondition_error("certify: empty range");
        RatInterval enc = best->enclosure(prec);
        if (!(enc.lo > 0)) throw precision_error("certify: could not bound gamma away from 0");
        certificate = std::make_pair(enc.lo, tau);
        k_checked = K;
    }

    // basis-of-a-real-quadratic-field constructor: (1, s) with s a surd is
    // diophantine of exponent tau = n - 1 = 1 (stated property, not re-proved
    // here); the finite-range gamma still comes from an explicit scan
    static FrequencyVector quadratic_basis(const QuadRat& s, long K = 1000, unsigned prec = 128) {
        FrequencyVector fv;
        fv.mu.push_back(QuadRat::from_rat(Rat(1), s.d));
        fv.mu.push_back(s);
        fv.certify(K, Rat(1), prec);
        return fv;
    }
};

struct resonant_mode_error : precondition_error {
    using precondition_error::precondition_error;
};
struct nonzero_mean_error : precondition_error {
    using precondition_error::precondition_error;
};

// Finitely supported Fourier coefficients of a (possibly vector-valued)
// function on T^n.  Coefficients are stored with an explicit power of
// (2 pi i): stored = true * (2 pi i)^scale.  Solving the cohomological
// equation raises the scale instead of dividing by a floating 2 pi, so
// D_mu(solve(v)) returns v coefficient-for-coefficient, exactly.
template <class C>
struct FourierField {
    size_t dim = 1;
    size_t components = 1;
    int twopi_i_scale = 0;
    std::map<std::vector<long>, std::vector<C>> modes;

    void set_mode(const std::vector<long>& k, std::vector<C> v) {
        if (k.size() != dim || v.size() != components)
            throw precondition_error("mode dimension mismatch");
        modes[k] = std::move(v);
    }

    bool zero_mean() const {
        auto it = modes.find(std::vector<long>(dim, 0));
        if (it == modes.end()) return true;
        for (const C& c : it->second)
            if (!(c == C{})) return false;
        return true;
    }

    bool same_support_equal(const FourierField& o) const {
        if (dim != o.dim || components != o.components || twopi_i_scale != o.twopi_i_scale)
            return false;
        for (const auto& [k, v] : modes) {
            auto it = o.modes.find(k);
            if (it == o.modes.end()) {
                for (const C& c : v)
                    if (!(c == C{})) return false;
                continue;
            }
            for (size_t j = 0; j < components; ++j)
                if (!(v[j] == it->second[j])) return false;
        }
        for (const auto& [k, v] : o.modes)
            if (!modes.count(k))
                for (const C& c : v)
                    if (!(c == C{})) return false;
        return true;
    }
};

// Exact coefficient field for surd frequencies: complex numbers with
// components in Q(sqrt(d)).
using TorusCoef = Cplx<QuadRat>;

inline TorusCoef torus_coef(const Rat& re, const Rat& im, const Int& d) {
    return TorusCoef(QuadRat::from_rat(re, d), QuadRat::from_rat(im, d));
}

// u with hat u_k = hat v_k / (2 pi i k.mu), hat u_0 = 0.  The 1/(2 pi i)
// factor is carried symbolically in twopi_i_scale.
inline FourierField<TorusCoef> solve_cohomological(const FourierField<TorusCoef>& v,
                                                   const FrequencyVector& mu) {
    if (v.dim != mu.dim()) throw precondition_error("field/frequency dimension mismatch");
    if (!v.zero_mean()) throw nonzero_mean_error("nonzero-mean: hat v_0 != 0");
    FourierField<TorusCoef> u;
    u.dim = v.dim;
    u.components = v.components;
    u.twopi_i_scale = v.twopi_i_scale + 1;
    std::vector<long> zero(v.dim, 0);
    for (const auto& [k, coef] : v.modes) {
        if (k == zero) continue;
        QuadRat t = mu.dot(k);
        int sg = t.sign();
        if (sg == 0)
            throw resonant_mode_error("resonant-mode: mu.k = 0 at a support mode");
        std::vector<TorusCoef> out;
        out.reserve(coef.size());
        TorusCoef tinv(QuadRat::from_rat(Rat(1), t.d) / t, QuadRat::from_rat(Rat(0), t.d));
        for (const TorusCoef& c : coef) out.push_back(c * tinv);
        u.modes.emplace(k, std::move(out));
    }
    return u;
}

// D_mu u = mu . grad u: multiplies hat u_k by 2 pi i (k.mu); the 2 pi i
// goes into the symbolic scale, so this exactly undoes solve_cohomological.
inline FourierField<TorusCoef> apply_derivative(const FourierField<TorusCoef>& u,
                                                const FrequencyVector& mu) {
    if (u.dim != mu.dim()) throw precondition_error("field/frequency dimension mismatch");
    FourierField<TorusCoef> v;
    v.dim = u.dim;
    v.components = u.components;
    v.twopi_i_scale = u.twopi_i_scale - 1;
    std::vector<long> zero(u.dim, 0);
    for (const auto& [k, coef] : u.modes) {
        QuadRat t = mu.dot(k);
        std::vector<TorusCoef> out;
        out.reserve(coef.size());
        TorusCoef tc(t, QuadRat::from_rat(Rat(0), t.d));
        for (const TorusCoef& c : coef) out.push_back(c * tc);
        if (k == zero) {
            bool all_zero = true;
            for (auto& c : out) all_zero &= c.is_zero();
            if (!all_zero) throw invariant_violation("derivative created a mean mode");
        }
        v.modes.emplace(k, std::move(out));
    }
    return v;
}

inline double coef_abs_double(const TorusCoef& c, unsigned prec = 96) {
    RatInterval re = c.re.enclosure(prec), im = c.im.enclosure(prec);
    double x = re.mid().get_d(), y = im.mid().get_d();
    return std::hypot(x, y);
}

// sup_k (1 + |k|_1)^j |hat f_k| over the support, with the symbolic
// (2 pi i)-scale rendered numerically
template <class C>
double fourier_proxy_norm(const FourierField<C>& f, int j) {
    double best = 0;
    double scale = std::pow(2 * M_PI, -double(f.twopi_i_scale));
    for (const auto& [k, coef] : f.modes) {
        long knorm = 0;
        for (long v : k) knorm += std::abs(v);
        for (const C& c : coef) {
            double a = coef_abs_double(c) * scale;
            best = std::max(best, std::pow(1.0 + double(knorm), double(j)) * a);
        }
    }
    return best;
}

struct NormEstimate {
    double ratio = 0;     // ||u||_i proxy / ||v||_{i+r} proxy
    double bound = 0;     // analytic constant A_i valid for any certified field
    bool holds = false;   // ratio <= bound
    int i = 0;
    Rat r;
};

// Loss-of-differentiability estimate using the certified (gamma, tau):
// ratio <= A_i = (2 pi gamma)^{-1} max_{m>=1} m^tau (1+m)^{-r}, the sharp
// constant for the sup-form proxies.  Requires r > tau + n - 1.
inline NormEstimate norm_estimate(const FourierField<TorusCoef>& v, const FrequencyVector& mu,
                                  int i, const Rat& r) {
    if (!mu.certificate) throw precondition_error("norm_estimate needs a certified mu");
    auto [gamma, tau] = *mu.certificate;
    if (!(r > tau + Rat(Int(static_cast<long>(mu.dim()))) - 1))
        throw precondition_error("exponent-too-small: need r > tau + n - 1");
    // check the certificate covers the support
    for (const auto& [k, coef] : v.modes) {
        long knorm = 0;
        for (long vv : k) knorm += std::abs(vv);
        if (knorm > mu.k_checked)
            throw precondition_error("support exceeds certified range k_checked");
    }
    FourierField<TorusCoef> u = solve_cohomological(v, mu);
    NormEstimate out;
    out.i = i;
    out.r = r;
    double nu = fourier_proxy_norm(u, i);
    // ||v||_{i+r} proxy at the (possibly fractional) exponent i + r
    double nv = 0;
    {
        double scale = std::pow(2 * M_PI, -double(v.twopi_i_scale));
        for (const auto& [k, coef] : v.modes) {
            long knorm = 0;
            for (long vv : k) knorm += std::abs(vv);
            for (const TorusCoef& c : coef)
                nv = std::max(nv, std::pow(1.0 + double(knorm), double(i) + r.get_d()) *
                                      coef_abs_double(c) * scale);
        }
    }
    out.ratio = (nv > 0) ? nu / nv : 0;
    double g = gamma.get_d(), t = tau.get_d(), rr = r.get_d();
    double mstar = (rr > t && t > 0) ? t / (rr - t) : 1.0;
    double best = 0;
    for (long m = std::max(1L, static_cast<long>(mstar) - 2); m <= static_cast<long>(mstar) + 2;
         ++m)
        if (m >= 1) best = std::max(best, std::pow(double(m), t) * std::pow(1.0 + double(m), -rr));
    best = std::max(best, std::pow(1.0, t) * std::pow(2.0, -rr));
    out.bound = best / (2 * M_PI * g);
    out.holds = out.ratio <= out.bound * (1 + 1e-12);
    return out;
}

// |1 / (e^{2 pi i n alpha} - 1)| = 1 / (2 sin(pi ||n alpha||)) for 1 <= n <= N
inline std::vector<MpIval> fundamental_solution_coeffs(const ContinuedFractionTable& table,
                                                       size_t N, unsigned prec = 128) {
    DistOracle dist(table);
    std::vector<MpIval> out;
    out.reserve(N);
    for (size_t n = 1; n <= N; ++n)
        out.push_back(dist.small_divisor(static_cast<int64_t>(n), prec).recip());
    return out;
}

struct GrowthClass {
    enum class Label { distribution, hyperfunction, neither, undecided } label;
    std::vector<double> spike_exponents; // log|coef at q_k| / log q_k
    std::vector<double> qratio;          // log q_{k+1} / q_k
    double exponent_trend = 0;           // slope of spike exponents in k

    const char* label_str() const {
        switch (label) {
            case Label::distribution: return "distribution-consistent";
            case Label::hyperfunction: return "hyperfunction-consistent";
            case Label::neither: return "neither";
            default: return "undecided";
        }
    }
};

// Finite-depth consistency check of the fundamental solution's growth:
// polynomial spikes at convergent denominators (distribution) vs
// log q_{k+1}/q_k -> 0 (hyperfunction).  Heuristic labels, never
// certificates; the fitted numbers are returned alongside.
inline GrowthClass growth_classify(const ContinuedFractionTable& table, size_t N,
                                   unsigned prec = 128) {
    DistOracle dist(table);
    GrowthClass out;
    out.label = GrowthClass::Label::undecided;
    for (size_t k = 1; k + 1 < table.q.size(); ++k) {
        if (table.q[k] > Int(static_cast<unsigned long>(N))) break;
        if (table.q[k] < 2) continue;
        int64_t qk = table.q[k].get_si();
        // ||q_k alpha|| ~ 1/q_{k+1}: the enclosure needs that many bits
        unsigned bits = static_cast<unsigned>(mpz_sizeinbase(table.q[k + 1].get_mpz_t(), 2)) + 64;
        MpIval sd = dist.small_divisor(qk, std::max(prec, bits));
        double log_mag = -sd.log().mid_d();
        out.spike_exponents.push_back(log_mag / std::log(double(qk)));
        double lq1 = MpIval(table.q[k + 1], prec).log().mid_d();
        out.qratio.push_back(lq1 / table.q[k].get_d());
    }
    if (out.spike_exponents.size() < 3) return out;
    // trend of the spike exponents
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t n = out.spike_exponents.size();
        for (size_t idx = 0; idx < n; ++idx) {
            sx += idx;
            sy += out.spike_exponents[idx];
            sxx += double(idx) * idx;
            sxy += double(idx) * out.spike_exponents[idx];
        }
        double denom = n * sxx - sx * sx;
        out.exponent_trend = (denom != 0) ? (n * sxy - sx * sy) / denom : 0;
    }
    double e_tail = out.spike_exponents.back();
    double h_first = out.qratio.front(), h_last = out.qratio.back();
    bool poly = (out.exponent_trend <= 0.1) && (e_tail <= 5.0);
    bool sublog = (h_last <= 0.1) || (h_last <= h_first / 2);
    if (poly)
        out.label = GrowthClass::Label::distribution;
    else if (sublog)
        out.label = GrowthClass::Label::hyperfunction;
    else
        out.label = GrowthClass::Label::neither;
    return out;
}

} // namespace smalldiv

#endif
