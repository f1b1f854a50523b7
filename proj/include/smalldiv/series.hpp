#ifndef SMALLDIV_SERIES_HPP
#define SMALLDIV_SERIES_HPP

#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace smalldiv {

// scalars with exact (decidable) equality: rationals, Gaussian rationals,
// cyclotomic field elements
template <class C>
struct is_exact_coeff : std::false_type {};

// Truncated power series sum c[k] z^k, k = 0..N, over any scalar ring C.
// Dense vectors; all operations truncate at the target order.
template <class C>
using Series = std::vector<C>;

template <class C>
Series<C> series_zero(size_t N) {
    return Series<C>(N + 1, C{});
}

template <class C>
Series<C> series_identity(size_t N) {
    Series<C> s(N + 1, C{});
    if (N >= 1) s[1] = C(1);
    return s;
}

template <class C>
Series<C> mul_trunc(const Series<C>& a, const Series<C>& b, size_t N) {
    Series<C> r(N + 1, C{});
    for (size_t i = 0; i < a.size() && i <= N; ++i) {
        if (a[i] == C{}) continue;
        size_t jmax = std::min(N - i, b.size() - 1);
        for (size_t j = 0; j <= jmax; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

template <class C>
Series<C>& add_in_place(Series<C>& a, const Series<C>& b) {
    if (a.size() < b.size()) a.resize(b.size(), C{});
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

// f(g(z)) truncated at order N by Horner from the top; requires g(0) = 0
template <class C>
Series<C> compose_trunc(const Series<C>& f, const Series<C>& g, size_t N) {
    if (!g.empty() && !(g[0] == C{}))
        throw std::invalid_argument("compose_trunc: inner series must vanish at 0");
    Series<C> r(N + 1, C{});
    if (f.empty()) return r;
    size_t top = std::min(f.size() - 1, N);
    r[0] = f[top];
    for (size_t k = top; k-- > 0;) {
        r = mul_trunc(r, g, N);
        r[0] += f[k];
    }
    return r;
}

// compositional inverse: psi with psi(phi(z)) = z + O(z^{N+1});
// requires phi = z + higher order
template <class C>
Series<C> inverse_composition(const Series<C>& phi, size_t N) {
    if (phi.size() < 2 || !(phi[1] == C(1)))
        throw std::invalid_argument("inverse_composition: series must be tangent to identity");
    Series<C> psi(N + 1, C{});
    psi[1] = C(1);
    // phi^k truncated, built incrementally
    Series<C> phik = phi;
    phik.resize(N + 1, C{});
    Series<C> acc = phik; // sum_{k<=m-1} psi_k phi^k, starts with psi_1 phi
    for (size_t m = 2; m <= N; ++m) {
        phik = mul_trunc(phik, phi, N);
        // [z^m] (acc) must cancel: psi_m * [z^m] phi^m = -([z^m] acc); [z^m] phi^m = 1
        psi[m] = -acc[m];
        if (!(psi[m] == C{})) {
            for (size_t t = 0; t <= N; ++t) acc[t] += psi[m] * phik[t];
        }
    }
    return psi;
}

// q-fold self-composition truncated at N (f must fix 0)
template <class C>
Series<C> iterate_compose(const Series<C>& f, size_t q, size_t N) {
    Series<C> r = series_identity<C>(N);
    for (size_t i = 0; i < q; ++i) r = compose_trunc(f, r, N);
    return r;
}

} // namespace smalldiv

#endif
