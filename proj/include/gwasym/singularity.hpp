#ifndef GWASYM_SINGULARITY_HPP
#define GWASYM_SINGULARITY_HPP

#include "gwasym/invariants.hpp"
#include "gwasym/ode_flow.hpp"
#include "gwasym/scalars.hpp"
#include "gwasym/series.hpp"

#include <utility>
#include <vector>

namespace gwasym {

/// A-priori bracket for the singularity abscissa implied by the exponential
/// sandwich bounds: [ln(15/4), ln 27].
std::pair<Real, Real> x0_bracket();

/// x0 = z at the event; throws if the value leaves the a-priori bracket.
Real x0_from_flow(const EventResult& ev);

// Solves sum_{d<=D} d(3d-2) n_{0,d} e^{dx} = 27 for each truncation D and
// removes the truncation bias by fitting x(D) = x0 + sum_j alpha_j D^{-e_j}
// with half-integer exponents starting at 1 through the last points. The
// partial sums underestimate the series, so x(D) decreases toward x0.
Real x0_from_series(const InvariantTable& g0, const std::vector<int>& d_list);

/// Single-truncation root x(D) (exposed for diagnostics and tests).
Real x0_series_single(const InvariantTable& g0, int d_truncation);

/// Puiseux coefficients c'_0..c'_K of w(x0 - s) = sum c'_k s^{k/2}, from the
/// local event expansion composed with the reverted branch tau(s).
std::vector<Real> cprime_from_local(const EventResult& ev, int K);

/// (F0(x0), F0'(x0)) from the linear relations between (x, y, w) and the
/// generating-function derivatives.
std::pair<Real, Real> boundary_values(const EventResult& ev);

/// Genus-0 expansion coefficients a0_k, k = 3..N-1, from the odd Puiseux
/// data: a0_k = 4 (-1)^k Gamma(k+1/2) c'_{2k-5} / (pi (2k-1)(2k-3)).
/// Throws if a0_3 <= 0.
std::vector<Real> genus0_coeffs(const std::vector<Real>& cprime, int n_terms);

// Quotient series G'(s) = F1'(x0 - s) assembled from the Puiseux data of the
// genus-0 side and the elliptic constraint: numerator (F0''' - 3F0'' + 2F0')/8
// over denominator 27 + 2F0' - 3F0''. The denominator's constant term must
// vanish (event condition); it is checked against `tol` and dropped.
template <typename T>
PuiseuxSeries<T> genus1_gprime_series(const std::vector<T>& cprime, const T& f0prime,
                                      const T& tol);

struct Genus1Coeffs {
    PuiseuxSeries<Real> gprime;  // half-exponent indices from -2 upward
    std::vector<Real> a1;        // a1_0..a1_{N-1}
};

/// Genus-1 expansion coefficients a1_k = (-1)^k Gamma(k+1/2) g'_{2k-1} / pi.
/// Checks g'_{-2} = 1/48 to `tol`.
Genus1Coeffs genus1_coeffs(const std::vector<Real>& cprime, const Real& f0prime, int n_terms,
                           const Real& tol);

struct SingularityOptions {
    unsigned precision_bits = 256;
    Real z_init;                      // default -30
    IntegrationOptions integration;   // defaults for precision_bits
    int local_order = 24;
    int n_terms = 8;
    std::vector<int> d_list = {625, 1250, 2500, 5000};
    Real cross_tol;                   // |x0_flow - x0_series| budget, default 1e-8
    Real gprime_tol;                  // |g'_{-2} - 1/48| budget, default 1e-10

    static SingularityOptions defaults(unsigned precision_bits);
};

struct SingularityReport {
    Real x0;              // flow method
    Real x0_alt;          // series method
    std::vector<Real> b;  // local z coefficients b_0.. (b_0 = x0)
    std::vector<Real> c;  // local w coefficients c_0..
    std::vector<Real> cprime;
    std::vector<Real> gprime;  // indices -2.. stored from the front
    int gprime_min_index = -2;
    std::vector<Real> a0;  // a0_3..a0_{N-1}
    std::vector<Real> a1;  // a1_0..a1_{N-1}
    Real F0_at_x0, F0prime_at_x0;
    unsigned precision_bits = 0;
    int local_order = 0;
    int n_terms = 0;
    Real z_init;
    Real event_tol;
    Real x0_cross_diff;
};

/// Full pipeline: flow to the event, both x0 methods, Puiseux data and the
/// expansion coefficients of both genera, with all contract checks applied.
SingularityReport build_singularity_report(const InvariantTable& g0,
                                           const SingularityOptions& opt);

std::string report_to_json(const SingularityReport& r);
SingularityReport report_from_json(const std::string& text);

// --- template implementation -------------------------------------------------

template <typename T>
PuiseuxSeries<T> genus1_gprime_series(const std::vector<T>& cprime, const T& f0prime,
                                      const T& tol) {
    if (cprime.size() < 4) {
        throw std::invalid_argument("genus1_gprime_series needs c'_0..c'_3 at least");
    }
    const std::string var = "s";
    int kc = static_cast<int>(cprime.size()) - 1;
    PuiseuxSeries<T> W(var, 0, cprime, kc);
    PuiseuxSeries<T> f0ppp = puiseux_scale(T(-1), puiseux_derivative(W));
    // F0'(x0 - s) = F0'(x0) - int_0^s W
    PuiseuxSeries<T> f0p = puiseux_add(PuiseuxSeries<T>::constant(var, f0prime),
                                       puiseux_scale(T(-1), puiseux_integrate(W)));
    PuiseuxSeries<T> denom =
        puiseux_add(PuiseuxSeries<T>::constant(var, T(27)),
                    puiseux_add(puiseux_scale(T(2), f0p), puiseux_scale(T(-3), W)));
    T d0 = denom.coeff(0);
    T abs_d0 = d0 < T(0) ? T(-d0) : d0;
    if (abs_d0 > tol) {
        throw std::domain_error(
            "genus-1 quotient: 27 + 2 F0' - 3 F0'' does not vanish at the singularity");
    }
    if (!denom.is_zero() && denom.m == 0) {
        denom.g[0] = T(0);
        denom = denom.normalized();
    }
    PuiseuxSeries<T> numer = puiseux_add(
        f0ppp, puiseux_add(puiseux_scale(T(-3), W), puiseux_scale(T(2), f0p)));
    numer = puiseux_scale(T(1) / T(8), numer);
    return puiseux_div(numer, denom);
}

} // namespace gwasym

#endif
