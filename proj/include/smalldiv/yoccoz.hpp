#ifndef SMALLDIV_YOCCOZ_HPP
#define SMALLDIV_YOCCOZ_HPP

#include <smalldiv/alpha_oracle.hpp>
#include <smalldiv/cplx.hpp>
#include <smalldiv/germ.hpp>
#include <smalldiv/series.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace smalldiv {

// ---- Yoccoz's function u ----------------------------------------------------
//
// u_0 = 1, u_{n+1} = u_n - (lambda^n / 2) u_n^2; for |lambda| < 1 the limit
// u(lambda) has |u| equal to the conformal radius r_2 of the Siegel disk of
// the quadratic polynomial lambda(z - z^2/2).

template <class C>
C u_iterate(const C& lambda, size_t n) {
    C u = C(1);
    C lp = C(1);
    for (size_t k = 0; k < n; ++k) {
        u = u - lp * u * u / C(2);
        lp = lp * lambda;
    }
    return u;
}

struct UValue {
    Cplx<double> u;
    double trunc_bound = 0; // a priori tail bound at the stopping index
    size_t iters = 0;
    bool certified = false; // bound <= requested tolerance
};

// iterate until the a priori tail |l|^n M^2 / (2(1-|l|)) drops below tol,
// M = 2 (1-|l|)^{-2}; flags the point instead of failing when maxN is hit
inline UValue u_eval(const Cplx<double>& lambda, double tol, size_t maxN = 200000) {
    double r = cabs(lambda);
    if (r >= 1.0) throw precondition_error("u_eval needs |lambda| < 1");
    UValue out;
    double M = 2.0 / ((1 - r) * (1 - r));
    double tail = M * M / (2 * (1 - r)); // times r^n below
    Cplx<double> u(1.0), lp(1.0);
    size_t n = 0;
    double rn = 1.0;
    while (n < maxN) {
        if (tail * rn <= tol) break;
        u = u - lp * u * u * Cplx<double>(0.5);
        lp = lp * lambda;
        rn *= r;
        ++n;
    }
    out.u = u;
    out.iters = n;
    out.trunc_bound = tail * rn;
    out.certified = out.trunc_bound <= tol;
    return out;
}

// Exact Maclaurin coefficients c_0..c_N of u: iterate the recurrence on
// truncated polynomials with exact rationals; coefficient j is final once
// the iteration index exceeds j (u - u_n = O(lambda^n)), so N+1 steps do it.
inline std::vector<Rat> u_series(size_t N) {
    std::vector<Rat> u(N + 1, Rat(0));
    u[0] = 1;
    for (size_t k = 0; k <= N; ++k) {
        // u <- u - (z^k / 2) u^2, truncated at N
        std::vector<Rat> sq(N + 1, Rat(0));
        for (size_t i = 0; i + k <= N; ++i) {
            if (u[i] == 0) continue;
            for (size_t j = 0; i + j + k <= N; ++j) sq[i + j + k] += u[i] * u[j];
        }
        for (size_t t = k; t <= N; ++t) u[t] -= sq[t] / 2;
    }
    return u;
}

// power-of-two denominator check (true for every coefficient of u)
inline bool is_dyadic(const Rat& r) {
    Int d = r.get_den();
    while (d % 2 == 0) d /= 2;
    return d == 1;
}

// ---- quadratic linearization (normalization lambda (z - z^2)) ---------------
//
// H_1 = 1, H_n = (1 - lambda^{n-1})^{-1} sum_{i+j=n} H_i H_j, and the
// positive majorant h_n with |1 - lambda^{n-1}|^{-1}.  This normalization
// carries half the conformal radius of lambda (z - z^2/2): the homothety
// z -> 2z converts one linearization into the other.

template <class T>
struct QuadLin {
    Series<Cplx<T>> H;
    std::vector<T> h; // majorant sequence, h[n] >= |H_n|
};

namespace detail {

template <class T>
QuadLin<T> quadratic_linearization_impl(const Cplx<T>& lambda, size_t N,
                                        std::function<Cplx<T>(size_t)> one_minus_pow,
                                        std::function<T(size_t)> abs_one_minus_pow) {
    QuadLin<T> out;
    out.H.assign(N + 1, Cplx<T>{});
    out.h.assign(N + 1, T(0));
    out.H[1] = Cplx<T>(T(1));
    out.h[1] = T(1);
    for (size_t n = 2; n <= N; ++n) {
        Cplx<T> conv{};
        T mconv(0);
        for (size_t i = 1; i < n; ++i) {
            conv += out.H[i] * out.H[n - i];
            mconv += out.h[i] * out.h[n - i];
        }
        Cplx<T> div = one_minus_pow(n);
        if (div == Cplx<T>{})
            throw resonant_error("resonant-divisor: lambda^{n-1} = 1 at n = " + std::to_string(n));
        out.H[n] = conv / div;
        out.h[n] = mconv / abs_one_minus_pow(n);
        if (to_double(cabs(out.H[n])) > to_double(out.h[n]) * (1 + 1e-9))
            throw invariant_violation("majorant |H_n| <= h_n failed at n = " + std::to_string(n));
    }
    return out;
}

} // namespace detail

// off-circle multiplier: plain complex arithmetic for 1 - lambda^{n-1}
template <class T>
QuadLin<T> quadratic_linearization(const Cplx<T>& lambda, size_t N) {
    auto omp = [lambda](size_t n) { return Cplx<T>(T(1)) - cpow(lambda, n - 1); };
    auto aomp = [omp](size_t n) { return cabs(omp(n)); };
    return detail::quadratic_linearization_impl<T>(lambda, N, omp, aomp);
}

// on-circle multiplier e^{2 pi i alpha}: divisors from reduced angles
template <class T>
QuadLin<T> quadratic_linearization_circle(DistOracle& dist, size_t N, unsigned bits = 128) {
    Cplx<T> lambda = circle_multiplier<T>(dist, bits);
    auto omp = [&dist, bits](size_t n) {
        using std::sin;
        using std::cos;
        T f = rat_to<T>(dist.signed_frac(static_cast<int64_t>(n) - 1, bits).mid());
        T a = scalar_pi<T>() * f;
        T s = sin(a), c = cos(a);
        return Cplx<T>(T(2) * s * s, T(-2) * s * c); // 1 - e^{2ia}
    };
    auto aomp = [&dist, bits](size_t n) {
        using std::sin;
        T f = rat_to<T>(dist.dist_enclosure(static_cast<int64_t>(n) - 1, bits).mid());
        return T(2) * sin(scalar_pi<T>() * f); // 2 sin(pi ||(n-1) alpha||)
    };
    return detail::quadratic_linearization_impl<T>(lambda, N, omp, aomp);
}

// Conformal-radius estimate of the Siegel disk from the series of H: twice
// the series-radius estimate, undoing the z -> 2z normalization homothety.
// Uses the slope fit: the sup form 1/exp(max log|H_n|/n) carries an
// O(log n / n) bias from the square-root singularity's n^{-3/2} factor
// (about 2.7% at n ~ 400), while the slope is unbiased to O(1/n).
template <class T>
double siegel_radius_from_series(const QuadLin<T>& ql, size_t window_lo, size_t window_hi) {
    RadiusEstimate est = radius_estimate(ql.H, window_lo, window_hi);
    if (est.infinite) return std::numeric_limits<double>::infinity();
    return 2.0 * est.fit_radius;
}

// ---- radial limits -----------------------------------------------------------

struct RadialPoint {
    double r = 0;
    Cplx<double> u;
    double trunc_bound = 0;
    size_t iters = 0;
    bool certified = false;
};

// |u(r e^{2 pi i alpha})| along increasing radii: an estimator of
// r_2(e^{2 pi i alpha}), each point carrying its truncation bound
inline std::vector<RadialPoint> radial_limit_estimate(const ContinuedFractionTable& table,
                                                      const std::vector<double>& radii,
                                                      double tol = 1e-9, size_t maxN = 200000,
                                                      bool strict = false) {
    DistOracle dist(table);
    double alpha = dist.signed_frac(1, 96).mid().get_d();
    std::vector<RadialPoint> out;
    double prev = 0;
    for (double r : radii) {
        if (!(r > prev && r < 1)) throw precondition_error("radii must increase inside (0,1)");
        prev = r;
        Cplx<double> lambda = unit_circle_d(alpha) * Cplx<double>(r);
        UValue uv = u_eval(lambda, tol, maxN);
        if (strict && !uv.certified)
            throw precision_error("tolerance-unreachable at r = " + std::to_string(r));
        out.push_back({r, uv.u, uv.trunc_bound, uv.iters, uv.certified});
    }
    return out;
}

// ---- Birkhoff averages --------------------------------------------------------

struct BirkhoffResult {
    std::vector<std::pair<size_t, double>> averages; // (m, (1/m) sum log|z_j|)
    bool escaped = false;
    size_t escape_at = 0;
    double fitted_decay = 0; // slope of log|avg_m - avg_last| vs log m
};

// Running Birkhoff averages of log|z_j| along the orbit of `seed` under `f`,
// sampled at the given checkpoints.  |z| > escape_radius invalidates the
// estimate (seed was not in the closure of the linearization domain).
template <class Map>
BirkhoffResult birkhoff_radius(Map f, Cplx<double> seed, const std::vector<size_t>& checkpoints,
                               double escape_radius = 4.0) {
    if (checkpoints.empty()) throw precondition_error("birkhoff_radius needs checkpoints");
    BirkhoffResult out;
    Cplx<double> z = seed;
    double sum = 0;
    size_t m = 0;
    size_t ci = 0;
    size_t last = checkpoints.back();
    while (m < last) {
        double az = cabs(z);
        if (az > escape_radius) {
            out.escaped = true;
            out.escape_at = m;
            return out;
        }
        sum += std::log(az);
        z = f(z);
        ++m;
        while (ci < checkpoints.size() && m == checkpoints[ci]) {
            out.averages.emplace_back(m, sum / double(m));
            ++ci;
        }
    }
    // error-model fit: |avg_m - avg_final| ~ C m^{-chi}; report chi
    if (out.averages.size() >= 3) {
        double target = out.averages.back().second;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t cnt = 0;
        for (size_t i = 0; i + 1 < out.averages.size(); ++i) {
            double d = std::abs(out.averages[i].second - target);
            if (d <= 0) continue;
            double x = std::log(double(out.averages[i].first)), y = std::log(d);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2 && cnt * sxx - sx * sx != 0)
            out.fitted_decay = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    return out;
}

// quadratic polynomial in the normalization lambda (z - z^2/2) whose critical
// point is z = 1 (the Birkhoff seed of choice)
inline auto quadratic_map(const Cplx<double>& lambda) {
    return [lambda](const Cplx<double>& z) { return lambda * (z - z * z * Cplx<double>(0.5)); };
}

// synthetic conjugacy h . R_lambda . h^{-1} with h(z) = z/(1-z):
// f(z) = lambda z / (1 + z - lambda z), an exactly known linearizable map
inline auto moebius_conjugated_rotation(const Cplx<double>& lambda) {
    return [lambda](const Cplx<double>& z) {
        return lambda * z / (Cplx<double>(1.0) + z - lambda * z);
    };
}

// ---- level-set grids -----------------------------------------------------------

struct GridPoint {
    double re = 0, im = 0;
    double log_abs_u = 0, arg_u = 0;
    double trunc_bound = 0;
    bool certified = false;
};

// res x res lattice on [-rmax, rmax]^2 restricted to the annulus
// rmin <= |lambda| <= rmax; near-boundary points that cannot reach the
// tolerance by maxN iterations are emitted with certified = false
inline std::vector<GridPoint> u_grid(double rmin, double rmax, size_t res, double tol = 1e-9,
                                     size_t maxN = 20000) {
    if (!(rmax < 1.0) || rmin < 0 || rmin > rmax)
        throw precondition_error("u_grid needs 0 <= rmin <= rmax < 1");
    if (res < 1) throw precondition_error("u_grid needs res >= 1");
    std::vector<GridPoint> out;
    for (size_t iy = 0; iy < res; ++iy) {
        for (size_t ix = 0; ix < res; ++ix) {
            double x = (res == 1) ? 0.0 : -rmax + 2 * rmax * double(ix) / double(res - 1);
            double y = (res == 1) ? 0.0 : -rmax + 2 * rmax * double(iy) / double(res - 1);
            double r = std::hypot(x, y);
            if (r < rmin || r > rmax) continue;
            UValue uv = u_eval(Cplx<double>(x, y), tol, maxN);
            GridPoint p;
            p.re = x;
            p.im = y;
            p.log_abs_u = std::log(cabs(uv.u));
            p.arg_u = std::atan2(uv.u.im, uv.u.re);
            p.trunc_bound = uv.trunc_bound;
            p.certified = uv.certified;
            out.push_back(p);
        }
    }
    return out;
}

} // namespace smalldiv

#endif
