#ifndef GWASYM_SERIES_HPP
#define GWASYM_SERIES_HPP

#include "gwasym/scalars.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gwasym {

// Truncated power series sum_{k=0..K} c_k v^k over an exact or floating
// coefficient ring. Arithmetic truncates to the shorter operand, which is the
// order through which the result is actually determined by the inputs.
template <typename T>
struct TruncatedSeries {
    std::string var;
    std::vector<T> c;

    TruncatedSeries() : c(1, T(0)) {}
    TruncatedSeries(std::string v, std::vector<T> coeffs)
        : var(std::move(v)), c(std::move(coeffs)) {
        if (c.empty()) {
            throw std::invalid_argument("truncated series needs at least the constant term");
        }
    }

    int order() const { return static_cast<int>(c.size()) - 1; }

    const T& operator[](int k) const { return c.at(static_cast<size_t>(k)); }
};

namespace detail {

template <typename T>
void require_same_var(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    if (a.var != b.var) {
        throw std::invalid_argument("series variable mismatch: '" + a.var + "' vs '" + b.var + "'");
    }
}

} // namespace detail

template <typename T>
TruncatedSeries<T> operator+(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    detail::require_same_var(a, b);
    int k = std::min(a.order(), b.order());
    std::vector<T> c(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) c[i] = a[i] + b[i];
    return {a.var, std::move(c)};
}

template <typename T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    detail::require_same_var(a, b);
    int k = std::min(a.order(), b.order());
    std::vector<T> c(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) c[i] = a[i] - b[i];
    return {a.var, std::move(c)};
}

template <typename T>
TruncatedSeries<T> operator*(const T& s, const TruncatedSeries<T>& a) {
    std::vector<T> c = a.c;
    for (auto& v : c) v *= s;
    return {a.var, std::move(c)};
}

template <typename T>
TruncatedSeries<T> series_mul(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    detail::require_same_var(a, b);
    int k = std::min(a.order(), b.order());
    std::vector<T> c(static_cast<size_t>(k) + 1, T(0));
    for (int i = 0; i <= k; ++i) {
        if (i <= a.order()) {
            for (int j = 0; i + j <= k; ++j) c[i + j] += a[i] * b[j];
        }
    }
    return {a.var, std::move(c)};
}

template <typename T>
TruncatedSeries<T> operator*(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    return series_mul(a, b);
}

/// Cauchy division a/b; b must have an invertible constant term.
template <typename T>
TruncatedSeries<T> series_div(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
    detail::require_same_var(a, b);
    if (b[0] == T(0)) {
        throw std::domain_error(
            "series division by zero constant term; use Puiseux division instead");
    }
    int k = std::min(a.order(), b.order());
    std::vector<T> q(static_cast<size_t>(k) + 1, T(0));
    for (int n = 0; n <= k; ++n) {
        T acc = a[n];
        for (int i = 0; i < n; ++i) acc -= q[i] * b[n - i];
        q[n] = acc / b[0];
    }
    return {a.var, std::move(q)};
}

template <typename T>
TruncatedSeries<T> series_derivative(const TruncatedSeries<T>& a) {
    if (a.order() == 0) {
        return {a.var, {T(0)}};
    }
    std::vector<T> c(static_cast<size_t>(a.order()));
    for (int k = 1; k <= a.order(); ++k) c[k - 1] = T(k) * a[k];
    return {a.var, std::move(c)};
}

template <typename T>
TruncatedSeries<T> series_integrate(const TruncatedSeries<T>& a, const T& constant) {
    std::vector<T> c(a.c.size() + 1);
    c[0] = constant;
    for (int k = 0; k <= a.order(); ++k) c[k + 1] = a[k] / T(k + 1);
    return {a.var, std::move(c)};
}

/// Composition outer(inner); inner must have zero constant term.
template <typename T>
TruncatedSeries<T> series_compose(const TruncatedSeries<T>& outer,
                                  const TruncatedSeries<T>& inner) {
    if (inner[0] != T(0)) {
        throw std::invalid_argument("series composition needs inner constant term zero");
    }
    int k = std::min(outer.order(), inner.order());
    std::vector<T> acc(static_cast<size_t>(k) + 1, T(0));
    for (int i = outer.order(); i >= 0; --i) {
        std::vector<T> next(static_cast<size_t>(k) + 1, T(0));
        for (int p = 0; p <= k; ++p) {
            if (acc[p] == T(0)) continue;
            for (int q = 0; p + q <= k; ++q) next[p + q] += acc[p] * inner[q];
        }
        next[0] += outer[i];
        acc = std::move(next);
    }
    return {inner.var, std::move(acc)};
}

/// Square root of a series with unit constant term.
template <typename T>
TruncatedSeries<T> series_sqrt_unit(const TruncatedSeries<T>& a) {
    if (a[0] != T(1)) {
        throw std::invalid_argument("series square root requires unit constant term");
    }
    std::vector<T> s(a.c.size(), T(0));
    s[0] = T(1);
    for (int n = 1; n <= a.order(); ++n) {
        T acc = a[n];
        for (int i = 1; i < n; ++i) acc -= s[i] * s[n - i];
        s[n] = acc / T(2);
    }
    return {a.var, std::move(s)};
}

// Compositional inverse of a with a_0 = 0, a_1 != 0, to the same order.
// Triangular solve: the coefficient of v^n in a(rev(v)) involves rev_n only
// through the linear term, so each order is fixed by one division.
template <typename T>
TruncatedSeries<T> series_revert(const TruncatedSeries<T>& a, const std::string& newvar) {
    if (a[0] != T(0)) {
        throw std::invalid_argument("series reversion needs zero constant term");
    }
    if (a.order() < 1 || a[1] == T(0)) {
        throw std::domain_error("series reversion needs nonzero linear term");
    }
    int k = a.order();
    TruncatedSeries<T> rev{newvar, std::vector<T>(static_cast<size_t>(k) + 1, T(0))};
    rev.c[1] = T(1) / a[1];
    TruncatedSeries<T> arg = a;
    arg.var = newvar;
    for (int n = 2; n <= k; ++n) {
        TruncatedSeries<T> comp = series_compose(arg, rev);
        rev.c[n] = -comp[n] / a[1];
    }
    return rev;
}

// ---------------------------------------------------------------------------
// Puiseux series: sum_{k >= m} g_{k} s^{k/2}, with coefficients stored for
// half-exponent indices m .. m+len-1. `kmax` is the largest half-exponent
// index through which the series is determined; stored coefficients past the
// vector (up to kmax) are exact zeros. kmax == exact_cap marks a series known
// exactly at all orders (constants, polynomials).
// ---------------------------------------------------------------------------
template <typename T>
struct PuiseuxSeries {
    static constexpr int exact_cap = std::numeric_limits<int>::max() / 4;

    std::string var;
    int m = 0;
    int kmax = exact_cap;
    std::vector<T> g;

    PuiseuxSeries() = default;
    PuiseuxSeries(std::string v, int min_half_exponent, std::vector<T> coeffs,
                  int valid_kmax = exact_cap)
        : var(std::move(v)), m(min_half_exponent), kmax(valid_kmax), g(std::move(coeffs)) {
        if (!g.empty() && kmax < m + static_cast<int>(g.size()) - 1) {
            throw std::invalid_argument("puiseux kmax below stored coefficient range");
        }
    }

    static PuiseuxSeries constant(std::string v, const T& value) {
        if (value == T(0)) return zero(std::move(v));
        return {std::move(v), 0, {value}, exact_cap};
    }

    static PuiseuxSeries zero(std::string v) {
        PuiseuxSeries z;
        z.var = std::move(v);
        z.m = 0;
        z.kmax = exact_cap;
        return z;
    }

    bool is_zero() const { return g.empty(); }

    bool has_stored(int k) const {
        return !g.empty() && k >= m && k <= m + static_cast<int>(g.size()) - 1;
    }

    /// Coefficient of s^{k/2}; zero outside the stored range.
    T coeff(int k) const {
        if (!has_stored(k)) return T(0);
        return g[static_cast<size_t>(k - m)];
    }

    int top_stored() const { return g.empty() ? m - 1 : m + static_cast<int>(g.size()) - 1; }

    /// Drop leading exact zeros so g[0] is the leading coefficient.
    PuiseuxSeries normalized() const {
        PuiseuxSeries r = *this;
        size_t lead = 0;
        while (lead < r.g.size() && r.g[lead] == T(0)) ++lead;
        if (lead == r.g.size()) {
            r.g.clear();
            r.m = 0;
            return r;
        }
        r.g.erase(r.g.begin(), r.g.begin() + static_cast<long>(lead));
        r.m += static_cast<int>(lead);
        return r;
    }

    /// Restrict validity to half-exponent indices <= k (coefficients beyond are dropped).
    PuiseuxSeries truncated(int k) const {
        PuiseuxSeries r = *this;
        r.kmax = std::min(r.kmax, k);
        if (!r.g.empty() && r.top_stored() > r.kmax) {
            int keep = r.kmax - r.m + 1;
            if (keep <= 0) {
                r.g.clear();
                r.m = 0;
            } else {
                r.g.resize(static_cast<size_t>(keep));
            }
        }
        return r;
    }
};

namespace detail {

inline int sat_min(int a, int b) {
    return std::min(a, b);
}

inline int sat_add(int a, int b) {
    constexpr int cap = std::numeric_limits<int>::max() / 4;
    if (a >= cap || b >= cap) return cap;
    long s = static_cast<long>(a) + b;
    return s >= cap ? cap : static_cast<int>(s);
}

template <typename T>
void require_same_var(const PuiseuxSeries<T>& a, const PuiseuxSeries<T>& b) {
    if (a.var != b.var) {
        throw std::invalid_argument("puiseux variable mismatch: '" + a.var + "' vs '" + b.var + "'");
    }
}

} // namespace detail

template <typename T>
PuiseuxSeries<T> puiseux_add(const PuiseuxSeries<T>& a, const PuiseuxSeries<T>& b) {
    detail::require_same_var(a, b);
    int kmax = detail::sat_min(a.kmax, b.kmax);
    if (a.is_zero() && b.is_zero()) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = kmax;
        return z;
    }
    int m = a.is_zero() ? b.m : (b.is_zero() ? a.m : std::min(a.m, b.m));
    int top = std::min(kmax, std::max(a.top_stored(), b.top_stored()));
    if (top < m) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = kmax;
        return z;
    }
    std::vector<T> g(static_cast<size_t>(top - m) + 1, T(0));
    // one-sided coefficients are copied, not added to a fresh zero, so they
    // pass through bit-exactly in floating mode
    for (int k = m; k <= top; ++k) {
        bool ina = a.has_stored(k), inb = b.has_stored(k);
        if (ina && inb) {
            g[k - m] = a.coeff(k) + b.coeff(k);
        } else if (ina) {
            g[k - m] = a.coeff(k);
        } else if (inb) {
            g[k - m] = b.coeff(k);
        }
    }
    return PuiseuxSeries<T>(a.var, m, std::move(g), kmax).normalized();
}

template <typename T>
PuiseuxSeries<T> puiseux_scale(const T& s, const PuiseuxSeries<T>& a) {
    PuiseuxSeries<T> r = a;
    for (auto& v : r.g) v *= s;
    return r.normalized();
}

template <typename T>
PuiseuxSeries<T> puiseux_sub(const PuiseuxSeries<T>& a, const PuiseuxSeries<T>& b) {
    return puiseux_add(a, puiseux_scale(T(-1), b));
}

template <typename T>
PuiseuxSeries<T> puiseux_mul(const PuiseuxSeries<T>& a, const PuiseuxSeries<T>& b) {
    detail::require_same_var(a, b);
    if (a.is_zero() || b.is_zero()) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        bool a_exact_zero = a.is_zero() && a.kmax >= PuiseuxSeries<T>::exact_cap;
        bool b_exact_zero = b.is_zero() && b.kmax >= PuiseuxSeries<T>::exact_cap;
        if (a_exact_zero || b_exact_zero) {
            z.kmax = PuiseuxSeries<T>::exact_cap;
        } else {
            z.kmax = detail::sat_min(detail::sat_add(a.kmax, b.m), detail::sat_add(b.kmax, a.m));
        }
        return z;
    }
    // Unknown tails enter at a.kmax+1 (times b's leading power) and vice versa.
    int kmax = detail::sat_min(detail::sat_add(a.kmax, b.m), detail::sat_add(b.kmax, a.m));
    int m = a.m + b.m;
    int top = std::min(kmax, a.top_stored() + b.top_stored());
    std::vector<T> g(static_cast<size_t>(top - m) + 1, T(0));
    int na = static_cast<int>(a.g.size());
    int nb = static_cast<int>(b.g.size());
    for (int i = 0; i < na; ++i) {
        if (a.g[i] == T(0)) continue;
        for (int j = 0; j < nb && (a.m + i) + (b.m + j) <= top; ++j) {
            g[(a.m + i) + (b.m + j) - m] += a.g[i] * b.g[j];
        }
    }
    return PuiseuxSeries<T>(a.var, m, std::move(g), kmax);
}

/// Puiseux division a/b; b must not be identically zero. The quotient starts
/// at half-exponent a.m - b.m. `target_kmax` caps the computed order when
/// both operands are exact.
template <typename T>
PuiseuxSeries<T> puiseux_div(const PuiseuxSeries<T>& a, const PuiseuxSeries<T>& b,
                             int target_kmax = PuiseuxSeries<T>::exact_cap) {
    detail::require_same_var(a, b);
    PuiseuxSeries<T> bn = b.normalized();
    if (bn.is_zero()) {
        throw std::domain_error("puiseux division by zero series");
    }
    PuiseuxSeries<T> an = a.normalized();
    int kmax = detail::sat_min(detail::sat_add(an.kmax, -bn.m),
                               detail::sat_add(detail::sat_add(bn.kmax, an.m), -2 * bn.m));
    kmax = detail::sat_min(kmax, target_kmax);
    if (an.is_zero()) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = kmax;
        return z;
    }
    if (kmax >= PuiseuxSeries<T>::exact_cap) {
        throw std::invalid_argument("puiseux division of exact series needs target_kmax");
    }
    int m = an.m - bn.m;
    if (kmax < m) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = kmax;
        return z;
    }
    int len = kmax - m + 1;
    std::vector<T> q(static_cast<size_t>(len), T(0));
    for (int n = 0; n < len; ++n) {
        T acc = an.coeff(an.m + n);
        for (int i = 0; i < n; ++i) acc -= q[i] * bn.coeff(bn.m + (n - i));
        q[n] = acc / bn.g[0];
    }
    return PuiseuxSeries<T>(a.var, m, std::move(q), kmax);
}

/// d/ds of sum g_k s^{k/2}.
template <typename T>
PuiseuxSeries<T> puiseux_derivative(const PuiseuxSeries<T>& a) {
    if (a.is_zero()) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = detail::sat_add(a.kmax, -2);
        return z;
    }
    std::vector<T> g(a.g.size());
    for (size_t i = 0; i < a.g.size(); ++i) {
        int k = a.m + static_cast<int>(i);
        g[i] = a.g[i] * T(k) / T(2);
    }
    return PuiseuxSeries<T>(a.var, a.m - 2, std::move(g), detail::sat_add(a.kmax, -2))
        .normalized();
}

/// Antiderivative vanishing at s = 0; requires min half-exponent > -2.
template <typename T>
PuiseuxSeries<T> puiseux_integrate(const PuiseuxSeries<T>& a) {
    if (!a.is_zero() && a.m <= -2) {
        throw std::domain_error("puiseux integration across the s^-1 term");
    }
    if (a.is_zero()) {
        auto z = PuiseuxSeries<T>::zero(a.var);
        z.kmax = detail::sat_add(a.kmax, 2);
        return z;
    }
    std::vector<T> g(a.g.size());
    for (size_t i = 0; i < a.g.size(); ++i) {
        int k = a.m + static_cast<int>(i);
        g[i] = a.g[i] * T(2) / T(k + 2);
    }
    return PuiseuxSeries<T>(a.var, a.m + 2, std::move(g), detail::sat_add(a.kmax, 2));
}

/// View a polynomial in tau as a Puiseux series in tau's own variable with
/// doubled exponents (tau^k -> half-exponent 2k). `exact` marks a genuine
/// polynomial rather than a truncation.
template <typename T>
PuiseuxSeries<T> puiseux_from_truncated(const TruncatedSeries<T>& a, bool exact) {
    std::vector<T> g(2 * a.c.size() - 1, T(0));
    for (int k = 0; k <= a.order(); ++k) g[2 * k] = a[k];
    int kmax = exact ? PuiseuxSeries<T>::exact_cap : 2 * a.order() + 1;
    return PuiseuxSeries<T>(a.var, 0, std::move(g), kmax).normalized();
}

/// Evaluate a polynomial (coefficients in powers of its variable) at a
/// Puiseux argument with positive leading exponent. `poly_order_exact` marks
/// the polynomial as exact rather than a truncated series.
template <typename T>
PuiseuxSeries<T> puiseux_compose_poly(const TruncatedSeries<T>& poly,
                                      const PuiseuxSeries<T>& inner,
                                      bool poly_order_exact = false) {
    PuiseuxSeries<T> in = inner.normalized();
    if (!in.is_zero() && in.m < 1) {
        throw std::invalid_argument("puiseux composition needs argument vanishing at 0");
    }
    auto acc = PuiseuxSeries<T>::zero(in.var.empty() ? poly.var : in.var);
    for (int k = poly.order(); k >= 0; --k) {
        acc = puiseux_add(puiseux_mul(acc, in),
                          PuiseuxSeries<T>::constant(acc.var, poly[k]));
    }
    if (!poly_order_exact && !in.is_zero()) {
        // the polynomial's unknown tau^{K+1} tail enters at s^{(K+1)m/2}
        acc = acc.truncated((poly.order() + 1) * in.m - 1);
    }
    return acc;
}

// Even-order reversion at a quadratic critical point. Input: the local series
// z(t1 + tau) = x0 + b1 tau + b2 tau^2 + ... with |b1| <= b1_tol and b2 < 0.
// Returns tau as a Puiseux series in s = x0 - z, on the branch tau < 0 for
// small s > 0. The b1 term is treated as exactly zero.
template <typename T>
PuiseuxSeries<T> revert_even(const TruncatedSeries<T>& z_local, const T& b1_tol,
                             const std::string& svar = "s") {
    if (z_local.order() < 2) {
        throw std::invalid_argument("revert_even needs order >= 2");
    }
    const T& b1 = z_local[1];
    T abs_b1 = b1 < T(0) ? T(-b1) : b1;
    if (abs_b1 > b1_tol) {
        throw std::invalid_argument("revert_even: linear coefficient above tolerance");
    }
    const T& b2 = z_local[2];
    if (!(b2 < T(0))) {
        throw std::domain_error("revert_even: quadratic coefficient must be negative");
    }
    int K = z_local.order();
    // -(z - x0) = (-b2) tau^2 G(tau), G(0) = 1; sqrt(s) = sqrt(-b2) (-tau) sqrt(G).
    std::vector<T> gc(static_cast<size_t>(K) - 1, T(0));
    gc[0] = T(1);
    for (int k = 3; k <= K; ++k) gc[k - 2] = z_local[k] / b2;
    TruncatedSeries<T> G{"tau", std::move(gc)};
    TruncatedSeries<T> S = series_sqrt_unit(G);
    T root;
    if constexpr (std::is_same_v<T, Rat>) {
        auto r = rat_sqrt_exact(-b2);
        if (!r) {
            throw std::domain_error("revert_even over rationals needs -b2 a perfect square");
        }
        root = *r;
    } else {
        root = sqrt(-b2);
    }
    // H(tau) = -sqrt(-b2) tau S(tau) is determined through order K-1, so the
    // reverted branch tau(sigma), sigma = sqrt(s), is valid through K-1.
    std::vector<T> hc(static_cast<size_t>(K), T(0));
    for (int k = 0; k < static_cast<int>(S.c.size()) && k + 1 <= K - 1; ++k) {
        hc[k + 1] = -root * S[k];
    }
    TruncatedSeries<T> H{"tau", std::move(hc)};
    TruncatedSeries<T> tau_of_sigma = series_revert(H, "sigma");
    std::vector<T> g(tau_of_sigma.c.begin() + 1, tau_of_sigma.c.end());
    return PuiseuxSeries<T>(svar, 1, std::move(g), K - 1).normalized();
}

} // namespace gwasym

#endif
