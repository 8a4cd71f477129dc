#ifndef GWASYM_F0_EVALUATOR_HPP
#define GWASYM_F0_EVALUATOR_HPP

#include "gwasym/invariants.hpp"
#include "gwasym/scalars.hpp"

#include <mutex>
#include <vector>

namespace gwasym {

struct ComplexReal {
    Real re, im;
};

/// Thrown when the requested tail accuracy cannot be certified with the
/// available table range.
class TailAccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluates sum_d d^j n_{0,d} e^{dz} (the genus-0 generating function and its
// first three z-derivatives) with a certified truncation tail below a caller
// budget. Inside e^{Re z} < 15/4 the exponential sandwich bound gives a hard
// geometric tail estimate; beyond it an empirical term-ratio bound with a
// 10x safety factor is used, failing loudly when the ratios approach 1.
//
// Instances are safe for concurrent eval calls; the term cache is guarded.
class F0Evaluator {
public:
    F0Evaluator(const InvariantTable& g0, unsigned precision_bits);

    /// Series value at real z, derivative order 0..3, absolute error <= abs_err.
    Real eval(const Real& z, int deriv_order, const Real& abs_err) const;

    ComplexReal eval(const ComplexReal& z, int deriv_order, const Real& abs_err) const;

    /// Upper cutoff on Re z accepted by eval (estimate of the singularity
    /// abscissa minus a margin). Defaults to the a-priori upper bound ln 27.
    void set_domain_limit(const Real& x0_estimate, const Real& margin);

    unsigned precision_bits() const { return bits_; }

private:
    Real coefficient(int d, int deriv_order) const;
    int certified_terms(const Real& re_z, int deriv_order, const Real& abs_err) const;

    const InvariantTable* table_;
    unsigned bits_;
    Real domain_limit_;
    mutable std::mutex cache_mutex_;
    mutable std::vector<Real> cache_[4];  // d^j n_d prefixes per derivative order
};

} // namespace gwasym

#endif
