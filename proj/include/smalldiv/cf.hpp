#ifndef SMALLDIV_CF_HPP
#define SMALLDIV_CF_HPP

#include <smalldiv/real_input.hpp>

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

namespace smalldiv {

// Exact where the backend permits, certified rational interval otherwise.
// No entry of a table is ever a plain float.
using XVal = std::variant<Rat, QuadRat, RatInterval>;

inline RatInterval xval_enclosure(const XVal& v, unsigned bits = 128) {
    if (auto* r = std::get_if<Rat>(&v)) return RatInterval(*r);
    if (auto* s = std::get_if<QuadRat>(&v)) return s->enclosure(bits);
    return std::get<RatInterval>(v);
}

// -1 / +1 when certified, 0 when the interval straddles r (exact backends
// return 0 only on exact equality).
inline int xval_cmp(const XVal& v, const Rat& r) {
    if (auto* x = std::get_if<Rat>(&v)) return (*x < r) ? -1 : (*x > r ? 1 : 0);
    if (auto* s = std::get_if<QuadRat>(&v)) return s->cmp_rat(r);
    return std::get<RatInterval>(v).cmp(r);
}

inline double xval_double(const XVal& v) {
    return xval_enclosure(v, 64).mid().get_d();
}

// Partial quotients, convergents, remainders and the products beta_n of one
// real number.  Immutable after construction; construction asserts the
// determinant identity at every index.
struct ContinuedFractionTable {
    RealInput input;
    std::vector<Int> a;    // a[0] = integer part, a[n] >= 1 for n >= 1
    std::vector<Int> p, q; // convergents p[n]/q[n], n = 0..depth
    std::vector<XVal> x;   // remainders x_n in (0,1)
    std::vector<XVal> beta; // beta_n = prod_{i<=n} x_i = |q_n x - p_n|
    size_t depth = 0;       // number of quotients beyond a[0]
    bool exact = false;
    unsigned cert_bits = 128; // enclosure precision used for interval entries

    const Int& qn(size_t n) const { return q.at(n); }
    const Int& pn(size_t n) const { return p.at(n); }

    // index k with q_k <= n < q_{k+1}
    size_t k_of(const Int& n) const {
        if (n < 1) throw precondition_error("k_of needs n >= 1");
        size_t k = 0;
        while (k + 1 < q.size() && q[k + 1] <= n) ++k;
        if (k + 1 >= q.size()) throw depth_error("depth-insufficient: n beyond q_depth");
        return k;
    }

    // enclosure of the fractional part x_0
    RatInterval frac_enclosure(unsigned bits) const { return xval_enclosure(x.at(0), bits); }
};

namespace detail {

// exact Gauss-map expansion over a field element (Rat or QuadRat)
template <class F>
void expand_exact(F x0, size_t depth, ContinuedFractionTable& t) {
    std::vector<F> xs;
    xs.push_back(x0);
    for (size_t n = 0; n < depth; ++n) {
        const F& xn = xs.back();
        bool zero;
        if constexpr (std::is_same_v<F, Rat>)
            zero = (xn == 0);
        else
            zero = xn.is_zero();
        if (zero) throw depth_error("rational-terminated: expansion ended at depth " +
                                    std::to_string(n));
        F inv = [&] {
            if constexpr (std::is_same_v<F, Rat>)
                return Rat(Rat(1) / xn);
            else
                return F::from_rat(Rat(1), xn.d) / xn;
        }();
        Int an;
        if constexpr (std::is_same_v<F, Rat>)
            an = rat_floor(inv);
        else
            an = inv.floor();
        if (an < 1) throw invariant_violation("Gauss step produced a_n < 1");
        t.a.push_back(an);
        if constexpr (std::is_same_v<F, Rat>)
            xs.push_back(inv - Rat(an));
        else
            xs.push_back(inv - F::from_rat(Rat(an), inv.d));
    }
    for (auto& v : xs) t.x.emplace_back(std::move(v));
}

// certified expansion of a rational interval (decimal backend)
inline void expand_interval(RatInterval x0, size_t depth, ContinuedFractionTable& t) {
    std::vector<RatInterval> xs;
    xs.push_back(x0);
    for (size_t n = 0; n < depth; ++n) {
        const RatInterval& xn = xs.back();
        if (!xn.strictly_positive())
            throw precision_error("precision-exhausted: remainder not certainly positive at depth " +
                                  std::to_string(n));
        RatInterval inv = xn.recip();
        auto an = inv.floor_certified();
        if (!an)
            throw precision_error("precision-exhausted: cannot certify quotient a_" +
                                  std::to_string(n + 1));
        if (*an < 1) throw invariant_violation("Gauss step produced a_n < 1");
        t.a.push_back(*an);
        xs.push_back(inv - Rat(*an));
    }
    for (auto& v : xs) t.x.emplace_back(std::move(v));
}

// enclosure of the tail value [0; a_{s+1}, a_{s+2}, ...] of a quotient spec,
// via two consecutive convergents of the tail
inline RatInterval tail_enclosure(const RealInput::QuotientSpec& qs, size_t s, unsigned bits) {
    // state as if a_0 = 0 was just consumed: p_0 = 0, q_0 = 1
    Int pm1(0), pm2(1), qm1(1), qm2(0);
    Rat prev;
    bool have_prev = false;
    Int bound = 1;
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), bits);
    for (size_t j = 1;; ++j) {
        Int aj;
        try {
            aj = qs.quotient(s + j);
        } catch (const depth_error&) {
            // finite tail: the value is exactly the last convergent
            if (!have_prev) return RatInterval(Rat(0));
            return RatInterval(prev);
        }
        Int pj = aj * pm1 + pm2, qj = aj * qm1 + qm2;
        pm2 = pm1; pm1 = pj; qm2 = qm1; qm1 = qj;
        Rat cur(pj, qj);
        cur.canonicalize();
        if (have_prev && qm1 * qm2 >= bound)
            return (prev < cur) ? RatInterval(prev, cur) : RatInterval(cur, prev);
        prev = cur;
        have_prev = true;
    }
}

} // namespace detail

// Expansion to `depth` quotients past a_0.  Exact for rational and surd
// inputs; certified intervals for quotient-generated and decimal inputs.
// cert_bits controls the enclosure width of interval entries.
inline ContinuedFractionTable expand_cf(const RealInput& in, size_t depth,
                                        unsigned cert_bits = 0) {
    ContinuedFractionTable t;
    t.input = in;
    t.depth = depth;

    if (auto* r = std::get_if<RealInput::RationalSpec>(&in.spec)) {
        t.exact = true;
        Int a0 = rat_floor(r->value);
        t.a.push_back(a0);
        detail::expand_exact<Rat>(r->value - Rat(a0), depth, t);
    } else if (auto* s = std::get_if<RealInput::SurdSpec>(&in.spec)) {
        t.exact = true;
        Int a0 = s->value.floor();
        t.a.push_back(a0);
        detail::expand_exact<QuadRat>(s->value - Rat(a0), depth, t);
    } else if (auto* qsp = std::get_if<RealInput::QuotientSpec>(&in.spec)) {
        // quotients are given; remainders come from tail convergents
        t.a.push_back(qsp->a0);
        for (size_t n = 1; n <= depth; ++n) {
            Int an = qsp->quotient(n);
            if (an < 1) throw precondition_error("explicit quotient a_n < 1");
            t.a.push_back(an);
        }
        if (cert_bits == 0) cert_bits = 128;
        // make beta_n = prod x_i meaningful to the last index: widen per-entry bits
        unsigned bits = cert_bits + 2 * static_cast<unsigned>(depth);
        for (size_t n = 0; n <= depth; ++n)
            t.x.emplace_back(detail::tail_enclosure(*qsp, n, bits));
    } else {
        auto& dsp = std::get<RealInput::DecimalSpec>(in.spec);
        RatInterval v = dsp.interval();
        auto a0 = v.floor_certified();
        if (!a0) throw precision_error("precision-exhausted: integer part uncertain");
        t.a.push_back(*a0);
        detail::expand_interval(v - Rat(*a0), depth, t);
    }
    if (cert_bits != 0) t.cert_bits = cert_bits;

    // convergents (A2.9)-(A2.10): p_{-1} = q_{-2} = 1, p_{-2} = q_{-1} = 0
    Int pm1(1), pm2(0), qm1(0), qm2(1);
    for (size_t n = 0; n < t.a.size(); ++n) {
        Int pn = t.a[n] * pm1 + pm2;
        Int qn = t.a[n] * qm1 + qm2;
        t.p.push_back(pn);
        t.q.push_back(qn);
        pm2 = pm1; pm1 = pn;
        qm2 = qm1; qm1 = qn;
    }

    // beta_n: exact |q_n x - p_n| where possible, else product of remainders
    if (t.exact) {
        for (size_t n = 0; n <= depth; ++n) {
            if (auto* xr = std::get_if<Rat>(&t.x[0])) {
                Rat full = Rat(t.a[0]) + *xr;
                Rat b = Rat(t.q[n]) * full - Rat(t.p[n]);
                t.beta.emplace_back((n % 2 == 0) ? b : Rat(-b));
            } else {
                const QuadRat& x0 = std::get<QuadRat>(t.x[0]);
                QuadRat full = x0 + Rat(t.a[0]);
                QuadRat b = full * Rat(t.q[n]) - Rat(t.p[n]);
                t.beta.emplace_back((n % 2 == 0) ? b : -b);
            }
        }
    } else {
        RatInterval prod(Rat(1));
        for (size_t n = 0; n <= depth; ++n) {
            prod = prod * xval_enclosure(t.x[n], t.cert_bits);
            t.beta.emplace_back(prod);
        }
    }

    // determinant identity (A2.13): q_n p_{n-1} - p_n q_{n-1} = (-1)^n
    for (size_t n = 1; n < t.p.size(); ++n) {
        Int det = t.q[n] * t.p[n - 1] - t.p[n] * t.q[n - 1];
        if (det != ((n % 2 == 0) ? 1 : -1))
            throw invariant_violation("determinant identity failed at n=" + std::to_string(n));
    }
    return t;
}

// distance of an interval to the nearest integer, certified
inline RatInterval dist_to_z_interval(const RatInterval& y) {
    Int ml = rat_round(y.lo), mh = rat_round(y.hi);
    auto d = [](const Rat& v, const Int& m) { return abs(v - Rat(m)); };
    if (ml == mh) {
        Rat dl = d(y.lo, ml), dh = d(y.hi, ml);
        bool contains_int = (y.lo <= Rat(ml) && Rat(ml) <= y.hi);
        Rat lo = contains_int ? Rat(0) : std::min(dl, dh);
        return RatInterval(lo, std::max(dl, dh));
    }
    // straddles a half-integer (or more): distances reach up to 1/2
    Rat lo = std::min(d(y.lo, ml), d(y.hi, mh));
    if (y.hi - y.lo >= 1) lo = 0;
    return RatInterval(lo, Rat(1, 2));
}

// ||n*alpha||_Z: exact for exact backends, certified interval otherwise.
// Requires the table deep enough that q_k <= n < q_{k+1} for some k.
inline XVal dist_to_integers(const Int& n, const ContinuedFractionTable& t) {
    if (n < 1) throw precondition_error("dist_to_integers needs n >= 1");
    t.k_of(n); // depth check
    if (t.exact) {
        if (auto* xr = std::get_if<Rat>(&t.x[0])) {
            Rat y = Rat(n) * *xr;
            Int m = rat_round(y);
            return Rat(abs(y - Rat(m)));
        }
        const QuadRat& x0 = std::get<QuadRat>(t.x[0]);
        QuadRat y = x0 * Rat(n);
        Int m = (y + Rat(1, 2)).floor();
        QuadRat dv = y - Rat(m);
        return (dv.sign() < 0) ? -dv : dv;
    }
    // interval backends: the stored x_0 enclosure may be too wide once
    // multiplied by n; the caller controls cert_bits at expansion time
    RatInterval y = xval_enclosure(t.x[0], t.cert_bits) * Rat(n);
    return dist_to_z_interval(y);
}

// Theorem 4.4 form: (p, q) is a best approximation iff it is a convergent.
inline bool is_best_approximation(const Int& p, const Int& q,
                                  const ContinuedFractionTable& t) {
    if (q < 1) throw precondition_error("is_best_approximation needs q >= 1");
    if (q >= t.q.back()) throw depth_error("depth-insufficient: q beyond table");
    for (size_t n = 0; n < t.q.size(); ++n)
        if (t.q[n] == q && t.p[n] == p) return true;
    return false;
}

// Open interval of all x in (0,1) whose expansion starts with the given
// quotients (Gauss-map branch).  Endpoints exact; returned ordered.
inline std::pair<Rat, Rat> branch_interval(const std::vector<Int>& quots) {
    if (quots.empty()) throw precondition_error("branch_interval needs k >= 1");
    for (const Int& a : quots)
        if (a < 1) throw precondition_error("branch quotients must be >= 1");
    Int pm1(1), pm2(0), qm1(0), qm2(1);
    Int pk(0), qk(1), pk1(1), qk1(0); // p_k, q_k, p_{k-1}, q_{k-1} incl. a_0 = 0
    {
        // a_0 = 0 first
        std::vector<Int> all;
        all.push_back(0);
        for (auto& a : quots) all.push_back(a);
        for (size_t n = 0; n < all.size(); ++n) {
            Int pn = all[n] * pm1 + pm2;
            Int qn = all[n] * qm1 + qm2;
            pk1 = pm1; qk1 = qm1;
            pm2 = pm1; pm1 = pn;
            qm2 = qm1; qm1 = qn;
            pk = pn; qk = qn;
        }
    }
    Rat e1(pk, qk), e2(pk + pk1, qk + qk1);
    e1.canonicalize();
    e2.canonicalize();
    return (e1 < e2) ? std::make_pair(e1, e2) : std::make_pair(e2, e1);
}

} // namespace smalldiv

#endif
