#ifndef GWASYM_ASYMPTOTICS_HPP
#define GWASYM_ASYMPTOTICS_HPP

#include "gwasym/invariants.hpp"
#include "gwasym/scalars.hpp"
#include "gwasym/singularity.hpp"

#include <string>
#include <vector>

namespace gwasym {

// Evaluable truncation of the large-d expansion. Genus 0 sums
// a0_k d^{-k-1/2} for k = 3..N-1; genus 1 has the fixed leading 1/(48 d)
// plus a1_k d^{-k-3/2} for k = 0..N-1.
struct AsymptoticModel {
    int genus = 0;
    Real x0;
    std::vector<Real> coeffs;

    int n_terms() const {
        return genus == 0 ? static_cast<int>(coeffs.size()) + 3 : static_cast<int>(coeffs.size());
    }

    static AsymptoticModel genus0(const Real& x0, std::vector<Real> a0);
    static AsymptoticModel genus1(const Real& x0, std::vector<Real> a1);
    static AsymptoticModel from_report(const SingularityReport& r, int genus, int n_terms);
};

/// Model value at degree d in scaled form: log part is exactly -d*x0, the
/// mantissa is the polynomial part in d^{-1/2}.
ScaledValue model_eval(const AsymptoticModel& m, long d);

struct OrderFit {
    double slope = 0;
    double intercept = 0;
    int points = 0;
};

/// Least-squares slope of log |n_{g,d} e^{d x0} - mantissa(d)| against log d
/// over [d_lo, d_hi], with 10% trimmed from each end of the window. A correct
/// N-term model shows the remainder order: -(N+1/2) at genus 0, -(N+3/2) at
/// genus 1. Throws when the residual sits at the numeric noise floor.
OrderFit residual_order_fit(const InvariantTable& table, const AsymptoticModel& m, int d_lo,
                            int d_hi);

struct RootConvergence {
    std::vector<int> d;
    std::vector<double> r0, r1;          // d-th roots
    std::vector<double> gap0, gap1;      // |r_g - e^{-x0}|
    std::vector<double> cross;           // |r_0 - r_1|
    bool degenerate = false;             // too little data, nothing asserted
    bool gaps_decreasing = false;        // all three, over the last half
    double gap0_at_end = 0, gap1_at_end = 0, cross_at_end = 0;
};

/// d-th root diagnostics against e^{-x0} over [d_lo, d_hi]; genus-1 zeros
/// are skipped.
RootConvergence root_convergence(const InvariantTable& t0, const InvariantTable& t1,
                                 const Real& x0, int d_lo, int d_hi);

/// Log-log decay slope of the genus-1 leading-term gap |48 d e^{d x0} n - 1|
/// over the window (expected -1/2 from the next expansion term).
OrderFit fit_genus1_gap_decay(const InvariantTable& t1, const Real& x0, int d_lo, int d_hi);

/// CSV plot data: genus, d, rescaled exact value, model mantissa, residual.
std::string validation_csv(const InvariantTable& table, const AsymptoticModel& m, int d_lo,
                           int d_hi, int stride);

} // namespace gwasym

#endif
