#ifndef GWASYM_INVARIANTS_HPP
#define GWASYM_INVARIANTS_HPP

#include "gwasym/scalars.hpp"

#include <functional>
#include <vector>

namespace gwasym {

// Large-d table entry stored as value = mantissa * e^{log_e}, with the
// coarse exponent in a double and the significand at working precision.
struct ScaledValue {
    double log_e = 0.0;
    Real mantissa;

    bool is_zero() const { return mantissa == 0; }
    Real value() const;
    Real log() const;  // natural log; throws for zero entries
    static ScaledValue from_value(const Real& v);
};

// Normalized curve counts n_{g,d} of the plane, exact for small d and in
// scaled high-precision floating form for large d. Immutable once built.
struct InvariantTable {
    int genus = 0;
    std::vector<Rat> exact;          // index by degree; exact[0] unused
    std::vector<ScaledValue> scaled; // index by degree; empty if not built
    unsigned precision_bits = 0;     // precision of the scaled entries

    int dmax_exact() const { return exact.empty() ? 0 : static_cast<int>(exact.size()) - 1; }
    int dmax_scaled() const { return scaled.empty() ? 0 : static_cast<int>(scaled.size()) - 1; }
    int dmax() const { return std::max(dmax_exact(), dmax_scaled()); }

    bool has(int d) const { return d >= 1 && d <= dmax(); }
    const Rat& exact_at(int d) const;

    /// n_{g,d} at working precision; exact entries take precedence.
    Real value(int d) const;
    /// log n_{g,d}; throws if the entry is zero.
    Real log_value(int d) const;
};

/// Quadratic recursion weight T(d1,d2) for splitting degree d = d1+d2.
Rat kontsevich_weight(long long d1, long long d2);

/// Exact genus-0 table: n_{0,1} = 1/2 and the quadratic recursion upward.
InvariantTable genus0_table(int dmax);

/// Exact genus-1 table from the elliptic recursion; needs g0 through dmax.
InvariantTable genus1_table(int dmax, const InvariantTable& g0);

/// Run the same recursion in `bits`-bit floating arithmetic up to
/// dmax_scaled and attach the scaled entries. For genus 1 the scaled part of
/// g0 must cover dmax_scaled.
void extend_scaled(InvariantTable& table, int dmax_scaled, unsigned bits,
                   const InvariantTable* g0 = nullptr);

struct WdvvResidual {
    std::vector<Rat> coeffs;  // residual coefficient of q^d at index d; [0] unused
    int first_nonzero = -1;   // -1 when the residual vanishes identically
    bool zero() const { return first_nonzero < 0; }
};

/// Substitute the exact genus-0 series into the quantum-cohomology
/// associativity ODE and return the residual coefficients through `order`.
WdvvResidual verify_wdvv_series(const InvariantTable& g0, int order);

/// Degrees violating the exponential sandwich bounds (exact comparisons on
/// exact entries, guarded floating comparisons on scaled ones).
std::vector<int> verify_bounds(const InvariantTable& g0);

// Weight function plus seed for the comparison sequences that sandwich the
// genus-0 invariants in the bound proof.
struct ComparisonSpec {
    std::function<Rat(int)> f;
    Rat seed;
};

ComparisonSpec comparison_f1(const Rat& seed);  // f(d) = d(3d-2)/54
ComparisonSpec comparison_f2(const Rat& seed);  // f(d) = 2 d^2 / 15

struct ComparisonSequence {
    std::vector<Rat> n;  // recursion output, index by degree
    std::vector<Rat> m;  // m_d = f(d) n_d, closed form C_{d-1} m_1^d
};

/// Sequence n_d = sum f(j)f(d-j)/f(d) n_j n_{d-j}; checks the Catalan closed
/// form for m_d = f(d) n_d exactly and throws on mismatch.
ComparisonSequence comparison_sequence(const ComparisonSpec& spec, int dmax);

/// Catalan number C_k = (2k)! / (k! (k+1)!).
Int catalan_number(unsigned k);

} // namespace gwasym

#endif
