#ifndef SMALLDIV_CPLX_HPP
#define SMALLDIV_CPLX_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <smalldiv/rational.hpp>
#include <smalldiv/series.hpp>

#include <cmath>
#include <string>

namespace smalldiv {

// Arbitrary-precision real (MPFR-backed, round-to-nearest).  Precision is the
// thread default; set_default_bits picks it from a bit count.
using MpFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

inline void set_default_bits(unsigned bits) {
    // boost counts decimal digits
    MpFloat::default_precision(static_cast<unsigned>(bits * 0.30103) + 2);
}

inline MpFloat mp_pi() {
    MpFloat p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

// Complex numbers over any commutative ring/field scalar: double,
// long double, MpFloat, or mpq_class (exact Gaussian rationals).
template <class T>
struct Cplx {
    T re{}, im{};

    Cplx() = default;
    Cplx(T r) : re(std::move(r)), im(T{}) {}
    Cplx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    static Cplx zero() { return Cplx(); }
    static Cplx one() { return Cplx(T(1)); }

    bool is_zero() const { return re == T{} && im == T{}; }

    Cplx conj() const { return Cplx(re, -im); }
    Cplx operator-() const { return Cplx(-re, -im); }

    Cplx operator+(const Cplx& o) const { return Cplx(re + o.re, im + o.im); }
    Cplx operator-(const Cplx& o) const { return Cplx(re - o.re, im - o.im); }
    Cplx operator*(const Cplx& o) const {
        return Cplx(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    Cplx operator/(const Cplx& o) const {
        T n = o.re * o.re + o.im * o.im;
        return Cplx((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
    }
    Cplx& operator+=(const Cplx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cplx& operator-=(const Cplx& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Cplx& operator*=(const Cplx& o) { return *this = *this * o; }
    bool operator==(const Cplx& o) const { return re == o.re && im == o.im; }

    // squared modulus; exact for rational scalars
    T norm() const { return re * re + im * im; }
};

template <>
struct is_exact_coeff<Cplx<Rat>> : std::true_type {};

template <class T>
Cplx<T> cpow(Cplx<T> b, unsigned long e) {
    Cplx<T> r = Cplx<T>::one();
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// modulus / log-modulus for floating scalars (hypot avoids overflow when
// coefficients reach the top of the exponent range)
inline double cabs(const Cplx<double>& z) { return std::hypot(z.re, z.im); }
inline long double cabs(const Cplx<long double>& z) { return hypotl(z.re, z.im); }
inline MpFloat cabs(const Cplx<MpFloat>& z) {
    return boost::multiprecision::hypot(z.re, z.im);
}
inline double log_abs(const Cplx<double>& z) { return std::log(cabs(z)); }
inline long double log_abs(const Cplx<long double>& z) { return logl(cabs(z)); }
inline MpFloat log_abs(const Cplx<MpFloat>& z) {
    return boost::multiprecision::log(cabs(z));
}

inline double to_double(double v) { return v; }
inline double to_double(long double v) { return static_cast<double>(v); }
inline double to_double(const MpFloat& v) { return v.convert_to<double>(); }

inline MpFloat mp_from_rat(const Rat& r) {
    MpFloat v;
    mpfr_set_q(v.backend().data(), r.get_mpq_t(), MPFR_RNDN);
    return v;
}

template <class T>
T rat_to(const Rat& r) {
    if constexpr (std::is_same_v<T, MpFloat>)
        return mp_from_rat(r);
    else
        return static_cast<T>(mp_from_rat(r).convert_to<long double>());
}

template <class T>
T scalar_pi() {
    if constexpr (std::is_same_v<T, MpFloat>)
        return mp_pi();
    else
        return static_cast<T>(3.14159265358979323846264338327950288L);
}

// e^{2 pi i t} for floating scalars
template <class T>
Cplx<T> unit_circle(const T& t);

inline Cplx<double> unit_circle_d(double t) {
    return {std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)};
}
template <>
inline Cplx<double> unit_circle<double>(const double& t) { return unit_circle_d(t); }
template <>
inline Cplx<long double> unit_circle<long double>(const long double& t) {
    long double a = 2.0L * 3.14159265358979323846264338327950288L * t;
    return {cosl(a), sinl(a)};
}
template <>
inline Cplx<MpFloat> unit_circle<MpFloat>(const MpFloat& t) {
    MpFloat a = 2 * mp_pi() * t;
    return {boost::multiprecision::cos(a), boost::multiprecision::sin(a)};
}

} // namespace smalldiv

#endif
