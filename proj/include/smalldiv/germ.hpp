#ifndef SMALLDIV_GERM_HPP
#define SMALLDIV_GERM_HPP

#include <smalldiv/alpha_oracle.hpp>
#include <smalldiv/cplx.hpp>
#include <smalldiv/majorants.hpp>
#include <smalldiv/report.hpp>
#include <smalldiv/series.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace smalldiv {

// multiplier e^{2 pi i alpha} at scalar precision T
template <class T>
Cplx<T> circle_multiplier(DistOracle& dist, unsigned bits) {
    return unit_circle<T>(rat_to<T>(dist.signed_frac(1, bits).mid()));
}

// divisor callback lambda^n - lambda = lambda (e^{2 pi i (n-1) alpha} - 1),
// computed from the reduced angle of (n-1) alpha: tiny divisors keep full
// relative accuracy instead of cancelling in a naive complex subtraction
template <class T>
std::function<Cplx<T>(size_t)> circle_divisor(DistOracle& dist, unsigned bits) {
    Cplx<T> lambda = circle_multiplier<T>(dist, bits);
    return [&dist, bits, lambda](size_t n) -> Cplx<T> {
        using std::sin;
        using std::cos;
        T f = rat_to<T>(dist.signed_frac(static_cast<int64_t>(n) - 1, bits).mid());
        T a = scalar_pi<T>() * f;
        T s = sin(a), c = cos(a);
        // e^{2 i a} - 1 = 2 sin(a) (-sin(a) + i cos(a))
        Cplx<T> em1(T(-2) * s * s, T(2) * s * c);
        return lambda * em1;
    };
}

// Germ lambda*z + sum_{j>=2} f_j z^j over scalar C (complex float backend,
// exact Gaussian rationals, or a cyclotomic field).
template <class C>
struct Germ {
    C lambda{};
    Series<C> f; // f[j] for j >= 2; f[0], f[1] ignored

    C coeff(size_t j) const { return j < f.size() ? f[j] : C{}; }
    size_t top_order() const { return f.empty() ? 1 : f.size() - 1; }

    // the germ as a plain series lambda z + sum f_j z^j, truncated at N
    Series<C> as_series(size_t N) const {
        Series<C> s(N + 1, C{});
        if (N >= 1) s[1] = lambda;
        for (size_t j = 2; j <= N && j < f.size(); ++j) s[j] = f[j];
        return s;
    }
};

// Progressive solver for h(lambda z) = f(h(z)), h_1 = 1:
//   h_n = (lambda^n - lambda)^{-1} sum_{j=2}^n f_j [z^n] h^j.
// Maintains the triangular table [z^n] h^j so each order costs O(n^2);
// f_n may be chosen after seeing the partial sum (Cremer's construction).
template <class C>
class LinearizationEngine {
  public:
    LinearizationEngine(C lambda, size_t N, std::function<C(size_t)> divisor = nullptr)
        : N_(N), lambda_(std::move(lambda)), divisor_(std::move(divisor)) {
        h_.assign(N + 1, C{});
        if (N >= 1) h_[1] = C(1);
        f_.assign(N + 1, C{});
        pw_.resize(N + 1);
        n_ = 2;
    }

    size_t order() const { return n_; }
    const Series<C>& h() const { return h_; }
    const Series<C>& f() const { return f_; }

    C divisor(size_t n) const {
        if (divisor_) return divisor_(n);
        return cpow(lambda_, static_cast<unsigned long>(n)) - lambda_;
    }

    // sum_{j=2}^{n-1} f_j [z^n] h^j: everything at order n except the f_n term
    C partial_sum() {
        fill_column(n_);
        C s{};
        for (size_t j = 2; j < n_; ++j) s += f_[j] * pw_at(j, n_);
        return s;
    }

    // close order n with the given f_n; returns h_n
    const C& step(C fn) {
        C S = partial_sum();
        f_[n_] = std::move(fn);
        C div = divisor(n_);
        if (div == C{})
            throw resonant_error("resonant-divisor: lambda^n = lambda at n = " +
                                 std::to_string(n_));
        h_[n_] = (f_[n_] + S) / div;
        ++n_;
        return h_[n_ - 1];
    }

  private:
    // pw_[j] holds [z^t] h^j for t = j..N, filled column by column
    C& pw_at(size_t j, size_t t) { return pw_[j][t - j]; }

    void fill_column(size_t n) {
        for (size_t j = 2; j <= n; ++j) {
            if (pw_[j].empty()) pw_[j].assign(N_ + 1 - j, C{});
            if (n > N_) continue;
            C acc{};
            if (j == 2) {
                for (size_t m = 1; m <= n - 1; ++m) acc += h_[m] * h_[n - m];
            } else {
                for (size_t m = 1; m + (j - 1) <= n; ++m) acc += h_[m] * pw_at(j - 1, n - m);
            }
            pw_at(j, n) = acc;
        }
    }

    size_t N_, n_;
    C lambda_;
    Series<C> h_, f_;
    std::vector<std::vector<C>> pw_;
    std::function<C(size_t)> divisor_;
};

template <class C>
struct LinearizationSeries {
    Series<C> h;           // h[0] = 0, h[1] = 1, ..., h[N]
    size_t residual_order; // conjugacy identity verified through this order
};

namespace detail {

template <class C>
bool coeff_close(const C& a, const C& b, double rel_tol) {
    if constexpr (is_exact_coeff<C>::value) {
        (void)rel_tol;
        return a == b;
    } else {
        double da = to_double(cabs(a)), db = to_double(cabs(b));
        double scale = std::max({da, db, 1.0});
        C diff = a - b;
        return to_double(cabs(diff)) <= rel_tol * scale;
    }
}

} // namespace detail

// Independent residual check: f(h(z)) vs h(lambda z) via Horner composition.
// The tolerance is relative to the size of what the recurrence actually sums
// (the coefficients of h and f), since the identity holds by cancellation.
template <class C>
size_t conjugacy_residual_order(const Germ<C>& germ, const Series<C>& h, size_t N,
                                double rel_tol = 1e-10) {
    Series<C> fh = compose_trunc(germ.as_series(N), h, N);
    Series<C> hR(N + 1, C{});
    C lp = C(1);
    for (size_t n = 1; n <= N; ++n) {
        lp = lp * germ.lambda;
        hR[n] = (n < h.size()) ? h[n] * lp : C{};
    }
    if constexpr (is_exact_coeff<C>::value) {
        for (size_t n = 1; n <= N; ++n)
            if (!(fh[n] == hR[n])) return n - 1;
        return N;
    } else {
        double fmax = to_double(cabs(germ.lambda));
        for (size_t j = 2; j < germ.f.size(); ++j)
            fmax = std::max(fmax, to_double(cabs(germ.f[j])));
        for (size_t n = 1; n <= N; ++n) {
            double scale = std::max({1.0, to_double(cabs(fh[n])), to_double(cabs(hR[n])),
                                     to_double(cabs(h[n])) * fmax});
            if (to_double(cabs(fh[n] - hR[n])) > rel_tol * scale) return n - 1;
        }
        return N;
    }
}

// Formal linearization through order N.  Throws resonant_error if the
// divisor vanishes at some order <= N.
template <class C>
LinearizationSeries<C> linearize(const Germ<C>& germ, size_t N,
                                 std::function<C(size_t)> divisor = nullptr,
                                 bool check_residual = true, double rel_tol = 1e-10) {
    LinearizationEngine<C> eng(germ.lambda, N, divisor);
    for (size_t n = 2; n <= N; ++n) eng.step(germ.coeff(n));
    LinearizationSeries<C> out{eng.h(), N};
    if (check_residual) {
        out.residual_order = conjugacy_residual_order(germ, out.h, N, rel_tol);
        if (out.residual_order < N)
            throw invariant_violation("conjugacy residual failed at order " +
                                      std::to_string(out.residual_order + 1));
    }
    return out;
}

// ---- Koenigs-Poincare bound ------------------------------------------------

struct KoenigsReport {
    CheckReport report;
    double c1 = 0, c2 = 0, r = 0;
};

// Verify |h_n| <= (c1 c2 / r)^{n-1} sigma_n for a germ with |lambda| != 1 and
// declared coefficient bound |f_j| <= c1 r^{1-j}.  c2 bounds sup 1/|l^n - l|
// from a scan plus a tail estimate.
template <class C>
KoenigsReport koenigs_bound_check(const Germ<C>& germ, size_t N, double c1, double r) {
    double mod_l = to_double(cabs(germ.lambda));
    if (mod_l == 1.0 || mod_l == 0.0)
        throw precondition_error("koenigs_bound_check needs |lambda| not in {0, 1}");
    KoenigsReport out;
    out.c1 = c1;
    out.r = r;
    // declared bound must actually hold
    for (size_t j = 2; j < germ.f.size(); ++j) {
        double fj = to_double(cabs(germ.f[j]));
        if (fj > c1 * std::pow(r, 1.0 - double(j)) * (1 + 1e-12))
            throw precondition_error("declared coefficient bound |f_j| <= c1 r^{1-j} fails at j=" +
                                     std::to_string(j));
    }
    double inv_min = std::numeric_limits<double>::infinity();
    for (size_t n = 2; n <= std::max<size_t>(N, 64); ++n) {
        double d = to_double(cabs(cpow(germ.lambda, n) - germ.lambda));
        inv_min = std::min(inv_min, d);
    }
    // tail: for |l|<1, |l^n - l| >= |l|(1-|l|^{n-1}); for |l|>1 it grows
    if (mod_l < 1) inv_min = std::min(inv_min, mod_l * (1 - std::pow(mod_l, 63.0)));
    out.c2 = 1.0 / inv_min;

    auto lin = linearize(germ, N);
    auto sig = sigma_majorant(N);
    out.report.name = "Koenigs majorant bound";
    double logc = std::log(c1 * out.c2 / r);
    for (size_t n = 1; n <= N; ++n) {
        ++out.report.checked;
        double lhs = to_double(log_abs(lin.h[n]));
        if (lin.h[n] == C{}) continue; // log(0) = -inf: trivially below
        double rhs = double(n - 1) * logc + std::log(sig[n].get_d());
        if (!(lhs <= rhs + 1e-9))
            out.report.violation("order " + std::to_string(n) + ": log|h_n| = " +
                                 std::to_string(lhs) + " > " + std::to_string(rhs));
    }
    return out;
}

// ---- Cremer's construction -------------------------------------------------

template <class C>
struct CremerResult {
    Germ<C> germ;            // |f_n| = 1, phases aligned with the partial sums
    Series<C> h;             // the (divergent) formal linearization
    std::vector<double> log_divisor; // log|lambda^n - lambda| per order
};

// Build the germ of Thm 1.16: |f_n| = 1 and arg f_n equal to the phase of
// the accumulated sum, so |h_n| >= 1/|lambda^n - lambda|.  The divisor here
// is the one of recurrence (the paper states the bound against an
// index-shifted denominator; we use the recurrence's own divisor and say so).
inline CremerResult<Cplx<MpFloat>> cremer_germ(const ContinuedFractionTable& table, size_t N,
                                               unsigned prec = 256) {
    set_default_bits(prec);
    DistOracle dist(table);
    Cplx<MpFloat> lambda = circle_multiplier<MpFloat>(dist, prec + 32);
    auto divisor = circle_divisor<MpFloat>(dist, prec + 32);

    LinearizationEngine<Cplx<MpFloat>> eng(lambda, N, divisor);
    CremerResult<Cplx<MpFloat>> out;
    out.germ.lambda = lambda;
    out.germ.f.assign(N + 1, Cplx<MpFloat>{});
    for (size_t n = 2; n <= N; ++n) {
        Cplx<MpFloat> S = eng.partial_sum();
        MpFloat mod = cabs(S);
        Cplx<MpFloat> fn;
        if (mod == 0) {
            fn = Cplx<MpFloat>(MpFloat(1)); // empty/zero sum: phase 0
        } else {
            fn = S / Cplx<MpFloat>(mod); // unit modulus, same phase as S
        }
        out.germ.f[n] = fn;
        eng.step(fn);
        out.log_divisor.push_back(to_double(log_abs(divisor(n))));
    }
    out.h = eng.h();
    return out;
}

// ---- root-of-unity multipliers ---------------------------------------------

template <class C>
struct RootOfUnityResult {
    bool linearizable = false;
    Series<C> h_inverse; // averaging series (1/q) sum lambda^{-j} f^j when linearizable
};

// Proposition-level test: lambda a primitive q-th root of unity, f is
// linearizable iff f^q = id; the averaging series conjugates f to R_lambda.
template <class C>
RootOfUnityResult<C> root_of_unity_check(const Germ<C>& germ, size_t q, size_t N,
                                         double rel_tol = 1e-10) {
    if (q == 0) throw precondition_error("root_of_unity_check needs q >= 1");
    Series<C> fs = germ.as_series(N);
    Series<C> fq = iterate_compose(fs, q, N);
    Series<C> id = series_identity<C>(N);
    for (size_t n = 1; n <= N; ++n)
        if (!detail::coeff_close(fq[n], id[n], rel_tol)) return {false, {}};

    // h^{-1} = (1/q) sum_{j=0}^{q-1} lambda^{-j} f^j
    RootOfUnityResult<C> out;
    out.linearizable = true;
    Series<C> acc(N + 1, C{});
    Series<C> fj = series_identity<C>(N);
    C lam_inv = C(1) / germ.lambda;
    C w = C(1);
    for (size_t j = 0; j < q; ++j) {
        for (size_t t = 0; t <= N; ++t) acc[t] += w * fj[t];
        fj = compose_trunc(fs, fj, N);
        w = w * lam_inv;
    }
    C qinv = C(1) / C(static_cast<int>(q));
    for (size_t t = 0; t <= N; ++t) acc[t] = acc[t] * qinv;
    out.h_inverse = acc;

    // verify psi(f(z)) = lambda psi(z) through order N
    Series<C> lhs = compose_trunc(acc, fs, N);
    for (size_t n = 1; n <= N; ++n)
        if (!detail::coeff_close(lhs[n], germ.lambda * acc[n], rel_tol))
            throw invariant_violation("averaging series fails to conjugate at order " +
                                      std::to_string(n));
    return out;
}

// ---- resonant normal form ---------------------------------------------------

template <class C>
struct NormalFormResult {
    size_t n = 0;        // resonance depth: first monomial is z^{nq+1}
    C a{}, b{};
    Series<C> conjugator; // tangent-to-identity, kills all non-resonant terms
    Series<C> normal;     // the reduced germ, equals P_{n,a,b,lambda} through N
};

// Reduce a germ with primitive q-th root-of-unity multiplier and f^q != id
// to lambda z (1 + a z^{nq} + a^2 b z^{2nq}), by conjugations z + beta z^j.
// Exact backends recover (n, a, b) exactly.
template <class C>
NormalFormResult<C> resonant_normal_form(const Germ<C>& germ, size_t q, size_t N,
                                         double rel_tol = 1e-12) {
    if (q == 0) throw precondition_error("resonant_normal_form needs q >= 1");
    NormalFormResult<C> out;
    Series<C> g = germ.as_series(N);
    Series<C> conj = series_identity<C>(N);
    const C lambda = germ.lambda;

    auto conj_by = [&](size_t j, const C& beta) {
        Series<C> phi = series_identity<C>(N);
        phi[j] = beta;
        Series<C> psi = inverse_composition(phi, N);
        g = compose_trunc(psi, compose_trunc(g, phi, N), N);
        conj = compose_trunc(conj, phi, N);
    };
    auto is_near_zero = [&](const C& v) {
        if constexpr (is_exact_coeff<C>::value) {
            (void)rel_tol;
            return v == C{};
        } else {
            return to_double(cabs(v)) <= rel_tol;
        }
    };

    bool have_n = false;
    for (size_t j = 2; j <= N; ++j) {
        bool resonant = ((j - 1) % q == 0);
        if (!resonant) {
            C c = g[j];
            if (c == C{}) continue;
            C div = cpow(lambda, j) - lambda;
            conj_by(j, c / div);
            continue;
        }
        size_t k = (j - 1) / q;
        if (!have_n) {
            if (g[j] == C{} || is_near_zero(g[j])) continue;
            out.n = k;
            out.a = g[j] / lambda;
            have_n = true;
            continue;
        }
        if (k == 2 * out.n) {
            out.b = g[j] / (lambda * out.a * out.a);
            continue;
        }
        if (g[j] == C{} || is_near_zero(g[j])) continue;
        // kill the stray resonant term through the resonant conjugation at
        // order (k - n) q + 1; its effect at order j is exactly linear in beta
        size_t m = (k - out.n) * q + 1;
        Series<C> saved_g = g, saved_conj = conj;
        conj_by(m, C(1));
        C slope = g[j] - saved_g[j];
        g = saved_g;
        conj = saved_conj;
        if (slope == C{})
            throw invariant_violation("normal form: zero slope at order " + std::to_string(j));
        conj_by(m, (C{} - saved_g[j]) / slope);
    }
    if (!have_n)
        throw precondition_error("q-periodic: f^q = id through order " + std::to_string(N));
    if (2 * out.n * q + 1 > N)
        throw precondition_error("order-insufficient: need N >= 2nq+1 = " +
                                 std::to_string(2 * out.n * q + 1));

    // residual: g must equal P_{n,a,b,lambda} through order N
    Series<C> target(N + 1, C{});
    target[1] = lambda;
    target[out.n * q + 1] = lambda * out.a;
    target[2 * out.n * q + 1] = lambda * out.a * out.a * out.b;
    for (size_t t = 1; t <= N; ++t)
        if (!detail::coeff_close(g[t], target[t], 1e-9))
            throw invariant_violation("normal form residual failed at order " + std::to_string(t));
    out.normal = g;
    return out;
}

// ---- radius estimation -------------------------------------------------------

struct RadiusEstimate {
    double hadamard = 0;   // 1 / exp(max log|h_n| / n over the window)
    double fit_radius = 0; // exp(-slope) from least squares on log|h_n|
    double fit_r2 = 0;     // coefficient of determination of the fit
    bool infinite = false; // all window coefficients vanished
};

// Hadamard-style estimate of the radius of convergence from coefficients
// h[lo..hi].  An estimate, not a certificate.
template <class C>
RadiusEstimate radius_estimate(const Series<C>& h, size_t lo, size_t hi) {
    if (hi >= h.size()) hi = h.size() - 1;
    if (lo < 2) lo = 2;
    if (hi < lo + 8) throw precondition_error("radius_estimate needs a wider window");
    RadiusEstimate out;
    double max_ratio = -std::numeric_limits<double>::infinity();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    size_t cnt = 0;
    for (size_t n = lo; n <= hi; ++n) {
        if (h[n] == C{}) continue;
        double l = to_double(log_abs(h[n]));
        max_ratio = std::max(max_ratio, l / double(n));
        sx += n; sy += l; sxx += double(n) * n; sxy += double(n) * l; syy += l * l;
        ++cnt;
    }
    if (cnt == 0) {
        out.infinite = true;
        return out;
    }
    out.hadamard = std::exp(-max_ratio);
    double denom = cnt * sxx - sx * sx;
    if (cnt >= 2 && denom != 0) {
        double slope = (cnt * sxy - sx * sy) / denom;
        out.fit_radius = std::exp(-slope);
        double ss_tot = syy - sy * sy / cnt;
        double intercept = (sy - slope * sx) / cnt;
        double ss_res = 0;
        for (size_t n = lo; n <= hi; ++n) {
            if (h[n] == C{}) continue;
            double l = to_double(log_abs(h[n]));
            double pred = slope * double(n) + intercept;
            ss_res += (l - pred) * (l - pred);
        }
        out.fit_r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return out;
}

} // namespace smalldiv

#endif
