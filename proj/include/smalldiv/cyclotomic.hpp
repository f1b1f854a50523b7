#ifndef SMALLDIV_CYCLOTOMIC_HPP
#define SMALLDIV_CYCLOTOMIC_HPP

#include <smalldiv/rational.hpp>
#include <smalldiv/series.hpp>

#include <map>
#include <string>
#include <vector>

namespace smalldiv {

struct Cyclo;
template <>
struct is_exact_coeff<Cyclo> : std::true_type {};

namespace detail {

// polynomial helpers over Q, dense ascending coefficients
using QPoly = std::vector<Rat>;

inline void qpoly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// exact division assuming divisor is monic-ish and divides evenly
inline QPoly qpoly_div_exact(QPoly num, const QPoly& den) {
    QPoly q(num.size() > den.size() - 1 ? num.size() - den.size() + 1 : 0, Rat(0));
    while (num.size() >= den.size()) {
        size_t shift = num.size() - den.size();
        Rat c = num.back() / den.back();
        q[shift] = c;
        for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
        qpoly_trim(num);
        if (num.empty()) break;
    }
    return q;
}

// cyclotomic polynomial Phi_q: x^q - 1 divided by all Phi_d, d | q, d < q
inline const QPoly& cyclotomic_poly(unsigned q) {
    static std::map<unsigned, QPoly> cache;
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    QPoly num(q + 1, Rat(0));
    num[0] = -1;
    num[q] = 1;
    for (unsigned d = 1; d < q; ++d)
        if (q % d == 0) num = qpoly_div_exact(std::move(num), cyclotomic_poly(d));
    qpoly_trim(num);
    return cache.emplace(q, std::move(num)).first->second;
}

} // namespace detail

// Exact element of the cyclotomic field Q(zeta_q), represented as a
// polynomial in zeta modulo Phi_q.  Gives exact arithmetic for germs whose
// multiplier is a root of unity: resonance detection, normal forms, and
// the q-th iterate test are all decided exactly.
struct Cyclo {
    unsigned q = 1;
    std::vector<Rat> c; // degree < phi(q) = deg Phi_q

    Cyclo() : q(1), c{Rat(0)} {}
    explicit Cyclo(long v, unsigned q_ = 1) : q(q_), c{Rat(v)} { reduce(); }
    explicit Cyclo(const Rat& v, unsigned q_ = 1) : q(q_), c{v} { reduce(); }
    Cyclo(std::vector<Rat> coeffs, unsigned q_) : q(q_), c(std::move(coeffs)) { reduce(); }
    // for generic code paths: Cyclo(1), Cyclo(0) in the ambient field
    Cyclo(int v) : q(1), c{Rat(v)} {}

    static Cyclo zeta(unsigned q_) {
        std::vector<Rat> v(2, Rat(0));
        v[1] = 1;
        return Cyclo(std::move(v), q_);
    }

    size_t deg_bound() const { return detail::cyclotomic_poly(q).size() - 1; }

    void reduce() {
        const auto& phi = detail::cyclotomic_poly(q);
        size_t d = phi.size() - 1;
        while (c.size() > d) {
            Rat lead = c.back();
            size_t shift = c.size() - 1 - d;
            if (lead != 0)
                for (size_t i = 0; i <= d; ++i) c[shift + i] -= lead * phi[i];
            c.pop_back();
        }
        if (c.empty()) c.push_back(Rat(0));
    }

    void match(const Cyclo& o) const {
        if (q == o.q) return;
        if (q == 1 || o.q == 1) return; // rationals embed everywhere
        throw precondition_error("Cyclo: mixed cyclotomic fields");
    }
    unsigned common_q(const Cyclo& o) const { return (q == 1) ? o.q : q; }

    bool is_zero() const {
        for (const Rat& v : c)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const Cyclo& o) const { return (*this - o).is_zero(); }

    Cyclo operator-() const {
        Cyclo r = *this;
        for (Rat& v : r.c) v = -v;
        return r;
    }
    Cyclo operator+(const Cyclo& o) const {
        match(o);
        Cyclo r(*this);
        r.q = common_q(o);
        if (r.c.size() < o.c.size()) r.c.resize(o.c.size(), Rat(0));
        for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
        r.reduce();
        return r;
    }
    Cyclo operator-(const Cyclo& o) const { return *this + (-o); }
    Cyclo operator*(const Cyclo& o) const {
        match(o);
        std::vector<Rat> prod(c.size() + o.c.size() - 1, Rat(0));
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            for (size_t j = 0; j < o.c.size(); ++j) prod[i + j] += c[i] * o.c[j];
        }
        return Cyclo(std::move(prod), common_q(o));
    }
    Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
    Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
    Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }

    // inverse via extended Euclid against Phi_q (irreducible over Q)
    Cyclo inverse() const {
        if (is_zero()) throw precondition_error("Cyclo: division by zero");
        detail::QPoly a = detail::cyclotomic_poly(q), b(c.begin(), c.end());
        detail::qpoly_trim(b);
        // extended gcd: s*a + t*b = gcd; we need t with t*b = 1 mod a
        detail::QPoly t0{}, t1{Rat(1)};
        detail::QPoly r0 = a, r1 = b;
        while (!r1.empty()) {
            // r0 = qq * r1 + r2
            detail::QPoly qq(r0.size() > r1.size() - 1 ? r0.size() - r1.size() + 1 : 1, Rat(0));
            detail::QPoly rem = r0;
            while (rem.size() >= r1.size() && !rem.empty()) {
                size_t shift = rem.size() - r1.size();
                Rat coef = rem.back() / r1.back();
                qq[shift] += coef;
                for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= coef * r1[i];
                detail::qpoly_trim(rem);
            }
            // t2 = t0 - qq*t1
            detail::QPoly qt(qq.size() + (t1.empty() ? 1 : t1.size()) - 1, Rat(0));
            for (size_t i = 0; i < qq.size(); ++i) {
                if (qq[i] == 0) continue;
                for (size_t j = 0; j < t1.size(); ++j) qt[i + j] += qq[i] * t1[j];
            }
            detail::QPoly t2 = t0;
            if (t2.size() < qt.size()) t2.resize(qt.size(), Rat(0));
            for (size_t i = 0; i < qt.size(); ++i) t2[i] -= qt[i];
            detail::qpoly_trim(t2);
            t0 = std::move(t1);
            t1 = std::move(t2);
            r0 = std::move(r1);
            r1 = std::move(rem);
        }
        // r0 = gcd (a nonzero rational constant), t0 its Bezout cofactor for b
        if (r0.size() != 1)
            throw invariant_violation("Cyclo: Phi_q not coprime with element");
        Rat scale = Rat(1) / r0[0];
        std::vector<Rat> res(t0.begin(), t0.end());
        for (Rat& v : res) v *= scale;
        if (res.empty()) res.push_back(Rat(0));
        return Cyclo(std::move(res), q);
    }
    Cyclo operator/(const Cyclo& o) const { return *this * o.inverse(); }

    std::string str() const {
        std::string s;
        bool first = true;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (!first) s += " + ";
            s += c[i].get_str();
            if (i >= 1) s += "*zeta" + std::string(i > 1 ? "^" + std::to_string(i) : "");
            first = false;
        }
        return first ? "0" : s;
    }
};

} // namespace smalldiv

#endif
