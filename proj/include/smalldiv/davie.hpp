#ifndef SMALLDIV_DAVIE_HPP
#define SMALLDIV_DAVIE_HPP

#include <smalldiv/alpha_oracle.hpp>
#include <smalldiv/report.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace smalldiv {

// One scale k of Davie's construction: the set A_k of near-resonant indices,
// its completion A_k*, and the counting functions h_k <= g_k.
struct DavieLayer {
    size_t k = 0;
    Int qk, qk1;
    Rat Ek, eta;
    std::vector<int64_t> A;      // elements of A_k in [0, scan_hi]
    std::vector<char> astar;     // A_k* membership on [0, nprime]
    std::vector<int64_t> m;      // m_n on [0, N]
    std::vector<Rat> h, g;       // on [0, N]
};

struct DavieTable {
    ContinuedFractionTable cf;
    size_t N = 0;
    size_t kmax = 0;             // k(N)
    int64_t nprime = 0;          // scan extension N + q_kmax
    std::vector<DavieLayer> layers;
    std::vector<size_t> k_of_n;  // on [0, N], k_of_n[0] = 0
    std::vector<MpIval> K;       // K(0..N)
    std::vector<MpIval> Lk;      // log(2 q_{k+1}) per layer
    unsigned prec = 128;

    const MpIval& k_function(size_t n) const {
        if (n >= K.size()) throw precondition_error("K(n): n out of range");
        return K[n];
    }
};

namespace detail {

inline void assert_layer_props(const DavieLayer& L, size_t N) {
    const Rat one_eta = Rat(1) + L.eta;
    for (size_t n = 0; n <= N; ++n) {
        Rat lo = one_eta * Rat(Int(n)) / Rat(L.qk) - 2;
        Rat hi = one_eta * Rat(Int(n)) / Rat(L.qk) - 1;
        if (L.h[n] < lo || L.h[n] > hi)
            throw invariant_violation("Davie h_k range failed at k=" + std::to_string(L.k) +
                                      " n=" + std::to_string(n));
        if (n > 0 && L.h[n] < L.h[n - 1])
            throw invariant_violation("Davie h_k monotonicity failed at n=" + std::to_string(n));
        if (n > 0 && L.astar[n] && L.h[n] < L.h[n - 1] + 1)
            throw invariant_violation("Davie h_k A*-step failed at n=" + std::to_string(n));
        if (L.qk.fits_ulong_p() && n >= L.qk.get_ui()) {
            size_t prev = n - L.qk.get_ui();
            if (L.h[n] < L.h[prev] + 1)
                throw invariant_violation("Davie h_k(n+q_k) >= h_k(n)+1 failed at n=" +
                                          std::to_string(n));
        }
        if (L.g[n] < 0 || L.g[n] > one_eta * Rat(Int(n)) / Rat(L.qk))
            throw invariant_violation("Davie g_k range failed at n=" + std::to_string(n));
    }
    if (L.g[0] != 0) throw invariant_violation("Davie g_k(0) != 0");
}

} // namespace detail

// Build the full ledger of Davie's arithmetic functions for 0 <= n <= N.
// All per-layer quantities are exact rationals; K(n) carries certified logs.
inline DavieTable build_davie(const ContinuedFractionTable& t, size_t N, unsigned prec = 128,
                              int64_t scan_cap = 10'000'000) {
    if (t.q.back() <= Int(static_cast<unsigned long>(N)))
        throw depth_error("depth-insufficient: table must cover q_{k(N)+1} > N");
    DavieTable dt;
    dt.cf = t;
    dt.N = N;
    dt.prec = prec;
    dt.kmax = (N >= 1) ? t.k_of(Int(static_cast<unsigned long>(N))) : 0;
    if (!t.q[dt.kmax].fits_slong_p())
        throw depth_error("q_{k(N)} too large for Davie scan");
    dt.nprime = static_cast<int64_t>(N) + t.q[dt.kmax].get_si();

    DistOracle dist(t);

    for (size_t k = 0; k <= dt.kmax; ++k) {
        DavieLayer L;
        L.k = k;
        L.qk = t.q[k];
        L.qk1 = t.q[k + 1];
        L.Ek = std::max(Rat(L.qk), Rat(L.qk1, 4));
        L.eta = Rat(L.qk) / L.Ek;
        Rat thr(1, 8 * L.qk);

        // A_k must be known far enough beyond nprime that every membership
        // query for A_k* on [0, nprime] can see its j2 witness
        Int ek_ceil = rat_floor(L.Ek) + 1;
        if (!ek_ceil.fits_slong_p() || dt.nprime + ek_ceil.get_si() > scan_cap)
            throw depth_error("Davie scan window exceeds resource cap");
        int64_t scan_hi = dt.nprime + ek_ceil.get_si();

        for (int64_t n = 0; n <= scan_hi; ++n)
            if (n == 0 || dist.cmp(n, thr) <= 0) L.A.push_back(n);

        // residue classes of A_k mod q_k for predecessor lookups
        int64_t qk = L.qk.get_si();
        std::map<int64_t, std::vector<int64_t>> classes;
        for (int64_t j : L.A) classes[j % qk].push_back(j);

        L.astar.assign(static_cast<size_t>(dt.nprime) + 1, 0);
        size_t ai = 0; // index of the first element of A >= current j
        for (int64_t j = 0; j <= dt.nprime; ++j) {
            while (ai < L.A.size() && L.A[ai] < j) ++ai;
            if (ai < L.A.size() && L.A[ai] == j) {
                L.astar[j] = 1;
                continue;
            }
            // j1: largest element of A_k below j in the residue class of j
            auto& cls = classes[j % qk];
            auto it = std::lower_bound(cls.begin(), cls.end(), j);
            if (it == cls.begin()) continue;
            int64_t j1 = *(it - 1);
            // j2: smallest element of A_k above j
            if (ai >= L.A.size()) continue;
            int64_t j2 = L.A[ai];
            if (Rat(Int(j2 - j1)) < L.Ek) L.astar[j] = 1;
        }

        // m_n, h_k, g_k on [0, N]
        L.m.resize(N + 1);
        L.h.resize(N + 1);
        L.g.resize(N + 1);
        int64_t last = 0;
        for (size_t n = 0; n <= N; ++n) {
            if (L.astar[n]) last = static_cast<int64_t>(n);
            L.m[n] = last;
            Rat mn{Int(L.m[n])};
            Rat nn{Int(static_cast<unsigned long>(n))};
            Rat qkr{L.qk};
            Rat l1 = Rat((Rat(1) + L.eta) * nn) / qkr - 2;
            Rat l2 = Rat(mn * L.eta + nn) / qkr - 1;
            Rat l = std::max(l1, l2);
            bool guard = L.astar[static_cast<size_t>(L.m[n] + qk)];
            L.h[n] = guard ? (mn + L.eta * nn) / qkr - 1 : l;
            Rat floor_nq(floor_div(Int(n), L.qk));
            L.g[n] = std::max(L.h[n], floor_nq);
        }
        detail::assert_layer_props(L, N);
        dt.layers.push_back(std::move(L));
    }

    // k(n) on [0, N]
    dt.k_of_n.assign(N + 1, 0);
    {
        size_t k = 0;
        for (size_t n = 1; n <= N; ++n) {
            while (k + 1 < t.q.size() && t.q[k + 1] <= Int(static_cast<unsigned long>(n))) ++k;
            dt.k_of_n[n] = k;
        }
    }

    // K(n) = n log 2 + sum_{k<=k(n)} g_k(n) log(2 q_{k+1})
    MpIval log2 = MpIval(2L, prec).log();
    for (size_t k = 0; k <= dt.kmax; ++k)
        dt.Lk.push_back(MpIval(Int(2 * dt.layers[k].qk1), prec).log());
    dt.K.reserve(N + 1);
    for (size_t n = 0; n <= N; ++n) {
        MpIval v = MpIval(Int(static_cast<unsigned long>(n)), prec) * log2;
        if (n >= 1)
            for (size_t k = 0; k <= dt.k_of_n[n]; ++k)
                v += MpIval(dt.layers[k].g[n], prec) * dt.Lk[k];
        dt.K.push_back(v);
    }
    return dt;
}

// Lemma on near-resonant indices: ||n alpha|| <= 1/(4 q_k) forces n >= q_k
// and (q_k | n or n >= q_{k+1}/4).  Exhaustive scan over n <= N.
inline CheckReport lemma53_check(const ContinuedFractionTable& t, size_t k, size_t N) {
    if (k + 1 >= t.q.size()) throw depth_error("lemma53_check: k beyond table depth");
    CheckReport rep;
    rep.name = "near-resonance trichotomy (k=" + std::to_string(k) + ")";
    DistOracle dist(t);
    Rat thr(1, 4 * t.q[k]);
    for (int64_t n = 1; n <= static_cast<int64_t>(N); ++n) {
        if (dist.cmp(n, thr) > 0) continue;
        ++rep.checked;
        Int nn(n);
        bool ok = nn >= t.q[k] && (nn % t.q[k] == 0 || Rat(nn) >= Rat(t.q[k + 1], 4));
        if (!ok)
            rep.violation("n=" + std::to_string(n) + " flagged but neither divisible by q_k=" +
                          t.q[k].get_str() + " nor >= q_{k+1}/4");
    }
    return rep;
}

// -log|lambda^n - 1| <= K(n) - K(n-1) for 1 <= n <= N, certified.
inline CheckReport small_divisor_step_check(const DavieTable& dt, size_t N,
                                            unsigned prec = 0) {
    if (N > dt.N) throw precondition_error("step check beyond table N");
    if (prec == 0) prec = dt.prec;
    CheckReport rep;
    rep.name = "small-divisor step bound";
    DistOracle dist(dt.cf);
    MpIval log2 = MpIval(2L, prec).log();
    for (size_t n = 1; n <= N; ++n) {
        // K(n) - K(n-1) with exact per-layer increments
        MpIval rhs = log2;
        for (size_t k = 0; k <= dt.k_of_n[n]; ++k) {
            // layers above k(n-1) enter K(n) but not K(n-1)
            bool in_prev = (n >= 2) && k <= dt.k_of_n[n - 1];
            Rat dg = in_prev ? dt.layers[k].g[n] - dt.layers[k].g[n - 1] : dt.layers[k].g[n];
            if (dg != 0) rhs += MpIval(dg, prec) * dt.Lk[k];
        }
        MpIval lhs = -(dist.small_divisor(static_cast<int64_t>(n), prec).log());
        ++rep.checked;
        if (!lhs.certainly_le(rhs))
            rep.violation("n=" + std::to_string(n) + ": -log|l^n-1| in [" +
                          std::to_string(lhs.lo_d()) + "," + std::to_string(lhs.hi_d()) +
                          "] vs K-step [" + std::to_string(rhs.lo_d()) + "," +
                          std::to_string(rhs.hi_d()) + "]");
    }
    return rep;
}

// K superadditivity: exact layerwise check of g_k(n1)+g_k(n2) <= g_k(n1+n2)
// plus a certified numeric check of K itself.
inline CheckReport k_superadditivity_check(const DavieTable& dt, size_t N) {
    if (N > dt.N) throw precondition_error("superadditivity check beyond table N");
    CheckReport rep;
    rep.name = "K superadditivity";
    for (size_t n1 = 1; n1 <= N / 2; ++n1)
        for (size_t n2 = n1; n1 + n2 <= N; ++n2) {
            ++rep.checked;
            for (size_t k = 0; k <= dt.k_of_n[n1 + n2]; ++k) {
                const auto& g = dt.layers[k].g;
                if (g[n1] + g[n2] > g[n1 + n2]) {
                    rep.violation("g_" + std::to_string(k) + " superadditivity failed at (" +
                                  std::to_string(n1) + "," + std::to_string(n2) + ")");
                    break;
                }
            }
            if (dt.K[n1].lo_d() + dt.K[n2].lo_d() > dt.K[n1 + n2].hi_d())
                rep.violation("K superadditivity failed at (" + std::to_string(n1) + "," +
                              std::to_string(n2) + ")");
        }
    return rep;
}

// K(n) <= n (sum_{k<=k(n)} log(q_{k+1})/q_k + c0): reports the smallest
// admissible c0 over the run; the bound itself is asserted against the
// caller-provided regression constant.
inline CheckReport k_linear_bound_check(const DavieTable& dt, size_t N, double c0,
                                        double* fitted_c0 = nullptr) {
    CheckReport rep;
    rep.name = "K linear bound";
    double worst = 0;
    unsigned prec = dt.prec;
    std::vector<double> qsum_hi(dt.kmax + 1, 0.0), qsum_lo(dt.kmax + 1, 0.0);
    {
        MpIval acc(0L, prec);
        for (size_t k = 0; k <= dt.kmax; ++k) {
            acc += MpIval(dt.cf.q[k + 1], prec).log() * MpIval(Rat(1, dt.cf.q[k]), prec);
            qsum_hi[k] = acc.hi_d();
            qsum_lo[k] = acc.lo_d();
        }
    }
    for (size_t n = 1; n <= N; ++n) {
        ++rep.checked;
        double lhs = dt.K[n].hi_d() / static_cast<double>(n);
        double need = lhs - qsum_lo[dt.k_of_n[n]];
        worst = std::max(worst, need);
        if (need > c0)
            rep.violation("n=" + std::to_string(n) + " needs c0 >= " + std::to_string(need));
    }
    if (fitted_c0) *fitted_c0 = worst;
    rep.notes.push_back("smallest admissible c0 over this run: " + std::to_string(worst));
    return rep;
}

} // namespace smalldiv

#endif
