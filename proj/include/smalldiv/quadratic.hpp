#ifndef SMALLDIV_QUADRATIC_HPP
#define SMALLDIV_QUADRATIC_HPP

#include <smalldiv/rational.hpp>

#include <cmath>
#include <string>
#include <utility>

namespace smalldiv {

// Element (a + b*sqrt(d)) / c of the real quadratic field Q(sqrt(d)),
// d > 0 not a perfect square, c > 0, gcd(a, b, c) = 1.  Arithmetic is exact;
// this is what makes continued fractions of quadratic surds (and everything
// downstream: Brjuno sums, Davie sets, small divisors) certifiable.
struct QuadRat {
    Int a, b, c, d;

    QuadRat() : a(0), b(0), c(1), d(5) {}
    QuadRat(Int a_, Int b_, Int c_, Int d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
        if (c == 0) throw precondition_error("QuadRat: zero denominator");
        if (d <= 0 || mpz_perfect_square_p(d.get_mpz_t()))
            throw precondition_error("QuadRat: d must be positive and non-square");
        normalize();
    }
    static QuadRat from_rat(const Rat& r, const Int& d) {
        return QuadRat(r.get_num(), 0, r.get_den(), d);
    }

    void normalize() {
        if (c < 0) { a = -a; b = -b; c = -c; }
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g > 1) { a /= g; b /= g; c /= g; }
    }

    bool is_rational() const { return b == 0; }
    Rat rational_part() const { return Rat(a, c); }

    void check_field(const QuadRat& o) const {
        if (d != o.d && b != 0 && o.b != 0)
            throw precondition_error("QuadRat: mixed quadratic fields");
    }

    QuadRat operator-() const { QuadRat r = *this; r.a = -r.a; r.b = -r.b; return r; }

    QuadRat operator+(const QuadRat& o) const {
        check_field(o);
        Int dd = (b != 0) ? d : o.d;
        return QuadRat(a * o.c + o.a * c, b * o.c + o.b * c, c * o.c, dd);
    }
    QuadRat operator-(const QuadRat& o) const { return *this + (-o); }
    QuadRat operator*(const QuadRat& o) const {
        check_field(o);
        Int dd = (b != 0) ? d : o.d;
        return QuadRat(a * o.a + b * o.b * dd, a * o.b + b * o.a, c * o.c, dd);
    }
    QuadRat operator/(const QuadRat& o) const {
        check_field(o);
        // 1/((a + b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        Int dd = (b != 0) ? d : o.d;
        Int n = o.a * o.a - o.b * o.b * dd;
        if (n == 0) throw precondition_error("QuadRat: division by zero");
        QuadRat inv(o.c * o.a, -o.c * o.b, n, dd);
        return *this * inv;
    }
    QuadRat operator+(const Rat& r) const { return *this + from_rat(r, d); }
    QuadRat operator-(const Rat& r) const { return *this - from_rat(r, d); }
    QuadRat operator*(const Rat& r) const { return *this * from_rat(r, d); }

    // sign of a + b*sqrt(d) (exact: compare a^2 against b^2 d when signs mix).
    int sign() const {
        int sa = sgn(a), sb = sgn(b);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        Int lhs = a * a, rhs = b * b * d;
        int cmpv = cmp(lhs, rhs);
        if (cmpv == 0) throw invariant_violation("QuadRat: sqrt(d) rational");
        // |a| vs |b| sqrt(d): the larger magnitude decides.
        return (cmpv > 0) ? sa : sb;
    }

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const QuadRat& o) const { return (*this - o).is_zero(); }
    bool operator<(const QuadRat& o) const { return (*this - o).sign() < 0; }
    bool operator>(const QuadRat& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const QuadRat& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const QuadRat& o) const { return (*this - o).sign() >= 0; }
    int cmp_rat(const Rat& r) const { return (*this - from_rat(r, d)).sign(); }

    Int floor() const {
        // start from a double estimate, then fix up exactly
        double est = (a.get_d() + b.get_d() * std::sqrt(d.get_d())) / c.get_d();
        Int m(static_cast<long>(std::floor(est)));
        while (cmp_rat(Rat(m)) < 0) m -= 1;
        while (cmp_rat(Rat(m + 1)) >= 0) m += 1;
        return m;
    }

    // Certified rational enclosure of width <= 2^-bits * |b/c| + 2^-bits.
    RatInterval enclosure(unsigned bits) const {
        // sqrt(d) in [s, s+1] / 2^bits with s = floor(sqrt(d * 4^bits))
        Int scaled = d;
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
        Int s;
        mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
        Int two_b = 1;
        mpz_mul_2exp(two_b.get_mpz_t(), two_b.get_mpz_t(), bits);
        Rat slo(s, two_b), shi(s + 1, two_b);
        Rat ra(a), rb(b), rc(c);
        Rat v1 = (ra + rb * slo) / rc;
        Rat v2 = (ra + rb * shi) / rc;
        return (v1 <= v2) ? RatInterval(v1, v2) : RatInterval(v2, v1);
    }

    double to_double() const { return enclosure(64).mid().get_d(); }

    std::string str() const {
        std::string s = "(" + a.get_str();
        if (b != 0) {
            s += (b > 0 ? "+" : "-");
            Int ab = abs(b);
            if (ab != 1) s += ab.get_str() + "*";
            s += "sqrt(" + d.get_str() + ")";
        }
        s += ")";
        if (c != 1) s += "/" + c.get_str();
        return s;
    }
};

// (sqrt(5)-1)/2, the golden rotation number.
inline QuadRat golden_g() { return QuadRat(-1, 1, 2, 5); }
// (sqrt(5)+1)/2
inline QuadRat golden_G() { return QuadRat(1, 1, 2, 5); }

} // namespace smalldiv

#endif
