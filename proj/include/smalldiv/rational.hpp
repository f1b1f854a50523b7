#ifndef SMALLDIV_RATIONAL_HPP
#define SMALLDIV_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace smalldiv {

using Int = mpz_class;
using Rat = mpq_class;

// Error taxonomy shared by all modules.  The CLI maps these onto exit codes.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct depth_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resonant_error : precondition_error {
    using precondition_error::precondition_error;
};
// Raised when a construction-time assertion drawn from the source lemmas
// fails; always indicates an implementation bug, not a math failure.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int rat_floor(const Rat& x) {
    return floor_div(x.get_num(), x.get_den());
}

// Nearest integer; half-integers round down (never hit by irrational inputs).
inline Int rat_round(const Rat& x) {
    return rat_floor(x + Rat(1, 2));
}

inline Rat pow_rat(Rat base, unsigned long e) {
    Rat r(1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline std::string rat_str(const Rat& x) {
    return x.get_str();
}

// Closed rational interval [lo, hi].  All arithmetic is exact; this is the
// workhorse behind certified continued-fraction expansion of decimal and
// quotient-generated inputs.
struct RatInterval {
    Rat lo, hi;

    RatInterval() : lo(0), hi(0) {}
    explicit RatInterval(const Rat& v) : lo(v), hi(v) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw invariant_violation("RatInterval: lo > hi");
    }

    bool is_point() const { return lo == hi; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool strictly_positive() const { return lo > 0; }

    RatInterval operator-() const { return RatInterval(-hi, -lo); }

    RatInterval operator+(const RatInterval& o) const {
        return RatInterval(lo + o.lo, hi + o.hi);
    }
    RatInterval operator-(const RatInterval& o) const {
        return RatInterval(lo - o.hi, hi - o.lo);
    }
    RatInterval operator*(const RatInterval& o) const {
        Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        Rat mn = a, mx = a;
        for (const Rat* v : {&b, &c, &d}) {
            if (*v < mn) mn = *v;
            if (*v > mx) mx = *v;
        }
        return RatInterval(mn, mx);
    }
    RatInterval operator+(const Rat& v) const { return RatInterval(lo + v, hi + v); }
    RatInterval operator-(const Rat& v) const { return RatInterval(lo - v, hi - v); }
    RatInterval operator*(const Rat& v) const {
        if (v >= 0) return RatInterval(lo * v, hi * v);
        return RatInterval(hi * v, lo * v);
    }

    // 1/x for intervals not containing zero.
    RatInterval recip() const {
        if (contains_zero()) throw precision_error("RatInterval: reciprocal across zero");
        return RatInterval(Rat(1) / hi, Rat(1) / lo);
    }

    RatInterval abs() const {
        if (lo >= 0) return *this;
        if (hi <= 0) return -*this;
        Rat m = (-lo > hi) ? -lo : hi;
        return RatInterval(Rat(0), m);
    }

    // floor certified only when both endpoints agree.
    std::optional<Int> floor_certified() const {
        Int fl = rat_floor(lo);
        if (fl == rat_floor(hi)) return fl;
        return std::nullopt;
    }

    // -1 if certainly < v, +1 if certainly > v, 0 if undecidable (straddles).
    int cmp(const Rat& v) const {
        if (hi < v) return -1;
        if (lo > v) return 1;
        return 0;
    }
};

} // namespace smalldiv

#endif
