#ifndef SMALLDIV_BRJUNO_HPP
#define SMALLDIV_BRJUNO_HPP

#include <smalldiv/cf.hpp>
#include <smalldiv/interval.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smalldiv {

// Exact surd value of an eventually periodic quotient spec: the periodic
// tail solves a quadratic, the head folds back through the convergents.
inline QuadRat periodic_to_surd(const RealInput::QuotientSpec& qs) {
    if (qs.period.empty()) throw precondition_error("non-periodic input");
    // tail y = [0; b_1..b_m, b_1..b_m, ...]: y = (p_m + p_{m-1} y)/(q_m + q_{m-1} y)
    Int pm1(0), pm2(1), qm1(1), qm2(0); // after a_0 = 0
    for (const Int& b : qs.period) {
        Int pn = b * pm1 + pm2, qn = b * qm1 + qm2;
        pm2 = pm1; pm1 = pn;
        qm2 = qm1; qm1 = qn;
    }
    // q_{m-1} y^2 + (q_m - p_{m-1}) y - p_m = 0, take the positive root
    Int A = qm2, B = qm1 - pm2, C = -pm1;
    if (A == 0) throw invariant_violation("periodic_to_surd: degenerate quadratic");
    Int disc = B * B - 4 * A * C;
    QuadRat y(-B, 1, 2 * A, disc);
    if (y.sign() <= 0) y = QuadRat(-B, -1, 2 * A, disc);
    // fold the head: x = [0; a_1..a_h, tail]
    QuadRat x = y;
    for (auto it = qs.head.rbegin(); it != qs.head.rend(); ++it)
        x = QuadRat::from_rat(Rat(1), x.d) / (x + Rat(*it));
    return x + Rat(qs.a0);
}

// Largest partial quotient when the tail is provably bounded (periodic spec,
// or a surd whose cycle is visible in the table); nullopt otherwise.
inline std::optional<Int> bounded_quotient_max(const ContinuedFractionTable& t) {
    if (auto* qsp = std::get_if<RealInput::QuotientSpec>(&t.input.spec)) {
        if (qsp->period.empty()) return std::nullopt;
        Int m(1);
        for (const Int& a : qsp->head) m = std::max(m, a);
        for (const Int& a : qsp->period) m = std::max(m, a);
        return m;
    }
    if (std::holds_alternative<RealInput::SurdSpec>(t.input.spec)) {
        for (size_t j = 0; j < t.x.size(); ++j)
            for (size_t k = j + 1; k < t.x.size(); ++k)
                if (std::get<QuadRat>(t.x[j]) == std::get<QuadRat>(t.x[k])) {
                    Int m(1);
                    for (size_t i = 1; i <= k; ++i) m = std::max(m, t.a[i]);
                    return m;
                }
        return std::nullopt;
    }
    return std::nullopt;
}

struct BrjunoValue {
    MpIval partial_sum;                // sum_{n<=N} beta_{n-1} log(1/x_n)
    size_t depth = 0;
    std::optional<MpIval> tail_bound;  // present iff quotients provably bounded
    MpIval quotient_sum;               // sum_{n<=N} log(q_{n+1})/q_n
    enum class Flag { certified, divergence_suspected, undecided } flag = Flag::undecided;

    const char* flag_str() const {
        switch (flag) {
            case Flag::certified: return "brjuno-certified";
            case Flag::divergence_suspected: return "divergence-suspected";
            default: return "undecided";
        }
    }
};

inline MpIval brjuno_quotient_sum(const ContinuedFractionTable& t, size_t N,
                                  unsigned prec = 128) {
    if (t.depth < N + 1) throw depth_error("depth-insufficient for quotient sum");
    MpIval s(0L, prec);
    for (size_t n = 0; n <= N; ++n) {
        MpIval lq = MpIval(t.q[n + 1], prec).log();
        s += lq * MpIval(Rat(1, t.q[n]), prec);
    }
    return s;
}

// B_N(x) = sum_{n=0}^N beta_{n-1} log x_n^{-1}, beta_{-1} = 1, with the
// geometric tail bound g^N log(a_max + 2)/(1 - g) attached when the
// quotients are provably bounded.
inline BrjunoValue brjuno_series(const ContinuedFractionTable& t, size_t N,
                                 unsigned prec = 128) {
    if (t.depth < N + 1) throw depth_error("depth-insufficient for Brjuno series");
    BrjunoValue out;
    out.depth = N;
    MpIval sum(0L, prec);
    MpIval first_term(0L, prec), last_term(0L, prec);
    for (size_t n = 0; n <= N; ++n) {
        MpIval beta_prev = (n == 0) ? MpIval(1L, prec)
                                    : MpIval(xval_enclosure(t.beta[n - 1], prec), prec);
        MpIval xn(xval_enclosure(t.x[n], prec), prec);
        MpIval term = beta_prev * (-xn.log());
        if (n == 0) first_term = term;
        last_term = term;
        sum += term;
    }
    out.partial_sum = sum;
    out.quotient_sum = brjuno_quotient_sum(t, N, prec);

    if (auto amax = bounded_quotient_max(t)) {
        // g^N log(a_max+2)/(1-g), with 1/(1-g) as an exact-interval reciprocal
        RatInterval ge = golden_g().enclosure(prec);
        MpIval g(ge, prec);
        MpIval gn(1L, prec);
        for (size_t i = 0; i < N; ++i) gn = gn * g;
        MpIval la = MpIval(Int(*amax + 2), prec).log();
        MpIval rec((RatInterval(Rat(1)) - ge).recip(), prec);
        out.tail_bound = gn * la * rec;
        out.flag = BrjunoValue::Flag::certified;
    } else {
        // heuristic only: if the last term dominates the first, the series
        // shows no decay over the window
        out.flag = (last_term.lo_d() > first_term.hi_d())
                       ? BrjunoValue::Flag::divergence_suspected
                       : BrjunoValue::Flag::undecided;
    }
    return out;
}

// B^{(sigma)} partial sum: sum_{n<=N} beta_{n-1} x_n^{-1/sigma}
inline MpIval b_sigma(const ContinuedFractionTable& t, const Rat& sigma, size_t N,
                      unsigned prec = 128) {
    if (sigma <= 0) throw precondition_error("b_sigma needs sigma > 0");
    if (t.depth < N + 1) throw depth_error("depth-insufficient for b_sigma");
    MpIval s(0L, prec);
    Rat inv_sigma = Rat(1) / sigma;
    for (size_t n = 0; n <= N; ++n) {
        MpIval beta_prev = (n == 0) ? MpIval(1L, prec)
                                    : MpIval(xval_enclosure(t.beta[n - 1], prec), prec);
        MpIval xn(xval_enclosure(t.x[n], prec), prec);
        // x^{-1/sigma} = exp(-(1/sigma) log x)
        MpIval p = (-(xn.log()) * MpIval(inv_sigma, prec)).exp();
        s += beta_prev * p;
    }
    return s;
}

// Exact value of B at an eventually periodic (quadratic) input: a finite
// combination sum_j c_j log(1/xi_j) with c_j, xi_j in one quadratic field,
// solved from B(x) = -log x + x B(A(x)) around the cycle.
struct BrjunoClosedForm {
    std::vector<std::pair<QuadRat, QuadRat>> terms; // (coefficient, argument)
    MpIval value;

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i) s += " + ";
            s += terms[i].first.str() + "*log(1/" + terms[i].second.str() + ")";
        }
        return s;
    }
};

inline BrjunoClosedForm brjuno_periodic_exact(const RealInput& in, unsigned prec = 256,
                                              size_t max_orbit = 4096) {
    QuadRat x0;
    if (auto* s = std::get_if<RealInput::SurdSpec>(&in.spec)) {
        QuadRat v = s->value;
        x0 = v - Rat(v.floor());
    } else if (auto* qsp = std::get_if<RealInput::QuotientSpec>(&in.spec)) {
        QuadRat v = periodic_to_surd(*qsp);
        x0 = v - Rat(v.floor());
    } else {
        throw precondition_error("non-periodic input: closed form needs a quadratic surd");
    }
    // Gauss orbit until the first repeat
    std::vector<QuadRat> orbit{x0};
    size_t cycle_start = 0, cycle_len = 0;
    while (true) {
        const QuadRat& xn = orbit.back();
        if (xn.is_zero()) throw precondition_error("rational input has no Brjuno closed form");
        QuadRat inv = QuadRat::from_rat(Rat(1), xn.d) / xn;
        QuadRat next = inv - Rat(inv.floor());
        bool found = false;
        for (size_t j = 0; j < orbit.size(); ++j)
            if (orbit[j] == next) {
                cycle_start = j;
                cycle_len = orbit.size() - j;
                found = true;
                break;
            }
        if (found) break;
        if (orbit.size() >= max_orbit)
            throw precondition_error("period not found within orbit cap");
        orbit.push_back(next);
    }

    const Int& d = x0.d;
    auto one = QuadRat::from_rat(Rat(1), d);
    // prefix products P_j = prod_{i<j} x_i
    std::vector<QuadRat> P{one};
    for (size_t j = 0; j < orbit.size(); ++j) P.push_back(P.back() * orbit[j]);

    BrjunoClosedForm out;
    // cycle factor: C_m = prod over the cycle, coefficients P_s * C_j / (1 - C_m)
    QuadRat Cm = one;
    for (size_t j = cycle_start; j < orbit.size(); ++j) Cm = Cm * orbit[j];
    QuadRat denom = one - Cm;
    for (size_t j = 0; j < cycle_start; ++j) out.terms.emplace_back(P[j], orbit[j]);
    QuadRat Cj = P[cycle_start];
    for (size_t j = cycle_start; j < orbit.size(); ++j) {
        out.terms.emplace_back(Cj / denom, orbit[j]);
        Cj = Cj * orbit[j];
    }

    MpIval v(0L, prec);
    for (auto& [c, xi] : out.terms) {
        MpIval ci(c.enclosure(prec), prec);
        MpIval li = -(MpIval(xi.enclosure(prec), prec).log());
        v += ci * li;
    }
    out.value = v;
    return out;
}

struct DiophantineClass {
    Rat gamma;
    Rat tau;
    enum class Verdict { certified_member, certified_nonmember, undecided_at_depth } verdict;
    std::optional<std::pair<Int, Int>> witness; // (p, q) violating the bound
    std::string detail;

    const char* verdict_str() const {
        switch (verdict) {
            case Verdict::certified_member: return "certified-member";
            case Verdict::certified_nonmember: return "certified-nonmember";
            default: return "undecided-at-depth";
        }
    }
};

// CD(gamma, tau) membership test.  Nonmembership is certified by a violating
// convergent (sufficient: convergents minimize |qx - p| at their scale).
// Membership is certified only for provably bounded quotients with
// gamma <= 1/(a_max + 2), the floor from beta_n q_n > 1/(a_{n+1} + 2).
inline DiophantineClass diophantine_test(const ContinuedFractionTable& t, const Rat& gamma,
                                         const Rat& tau, size_t depth, unsigned prec = 128) {
    if (gamma <= 0) throw precondition_error("diophantine gamma must be > 0");
    if (depth < 2) throw precondition_error("diophantine_test needs depth >= 2");
    depth = std::min(depth, t.depth);
    DiophantineClass out{gamma, tau, DiophantineClass::Verdict::undecided_at_depth, {}, ""};

    bool any_straddle = false;
    MpIval gi(gamma, prec);
    for (size_t n = 0; n + 1 <= depth; ++n) {
        if (t.q[n] == 0) continue;
        // violation iff beta_n < gamma q_n^{-1-tau}  (i.e. |x - p/q| < gamma q^{-2-tau})
        MpIval beta(xval_enclosure(t.beta[n], prec), prec);
        MpIval qp = (MpIval(t.q[n], prec).log() * MpIval(Rat(1) + tau, prec)).exp();
        MpIval lhs = beta * qp;
        int c = lhs.cmp(gi);
        if (c < 0) {
            out.verdict = DiophantineClass::Verdict::certified_nonmember;
            out.witness = std::make_pair(t.p[n], t.q[n]);
            out.detail = "convergent p_" + std::to_string(n) + "/q_" + std::to_string(n) +
                         " violates the lower bound";
            return out;
        }
        if (c == 0) any_straddle = true;
    }
    if (tau >= 0) {
        if (auto amax = bounded_quotient_max(t)) {
            Rat floor_gamma(1, *amax + 2);
            if (gamma <= floor_gamma && !any_straddle) {
                out.verdict = DiophantineClass::Verdict::certified_member;
                out.detail = "bounded quotients a_n <= " + amax->get_str() +
                             ", provable floor 1/(a_max+2) = " + floor_gamma.get_str();
                return out;
            }
        }
    }
    out.detail = any_straddle ? "interval comparisons could not be certified at this precision"
                              : "no violation up to depth; membership not certifiable";
    return out;
}

} // namespace smalldiv

#endif
