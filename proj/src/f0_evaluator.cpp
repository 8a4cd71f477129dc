#include "gwasym/f0_evaluator.hpp"

#include <mpfr.h>

#include <array>
#include <stdexcept>

namespace gwasym {

namespace {

constexpr unsigned kEvalGuardBits = 32;

} // namespace

F0Evaluator::F0Evaluator(const InvariantTable& g0, unsigned precision_bits)
    : table_(&g0), bits_(precision_bits) {
    if (g0.genus != 0) {
        throw std::invalid_argument("F0Evaluator needs a genus-0 table");
    }
    if (g0.dmax() < 1) {
        throw std::invalid_argument("F0Evaluator needs a nonempty table");
    }
    PrecisionScope scope(bits_);
    domain_limit_ = log(Real(27));
}

void F0Evaluator::set_domain_limit(const Real& x0_estimate, const Real& margin) {
    if (margin <= 0) {
        throw std::invalid_argument("domain margin must be positive");
    }
    domain_limit_ = x0_estimate - margin;
}

Real F0Evaluator::coefficient(int d, int deriv_order) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& cache = cache_[deriv_order];
    if (static_cast<int>(cache.size()) <= d) {
        PrecisionScope scope(bits_ + kEvalGuardBits);
        if (cache.empty()) {
            cache.push_back(Real(0));
        }
        for (int k = static_cast<int>(cache.size()); k <= d; ++k) {
            Real c = table_->value(k);
            for (int j = 0; j < deriv_order; ++j) c *= k;
            cache.push_back(c);
        }
    }
    return cache[static_cast<size_t>(d)];
}

// Number of leading terms that provably leaves a tail below abs_err, or a
// TailAccuracyError when that cannot be certified within the table.
int F0Evaluator::certified_terms(const Real& re_z, int deriv_order, const Real& abs_err) const {
    const int dmax = table_->dmax();
    Real ez = exp(re_z);
    Real rho = ez * 4 / 15;
    if (rho < 1) {
        // tail(D) <= 3 sum_{d>D} d^{j-7/2} rho^d <= 3 D^{j-7/2} rho^{D+1}/(1-rho).
        // The bound is loose near the singularity; fall through to the
        // empirical estimate when it cannot certify within the table.
        for (int D = 8; D <= dmax; D = std::min(dmax, 2 * D)) {
            Real bound = 3 * pow(rho, D + 1) / (1 - rho);
            bound *= pow(Real(D), Real(deriv_order) - Real(7) / 2);
            if (bound < abs_err) {
                return D;
            }
            if (D == dmax) break;
        }
    }
    // Empirical geometric bound from the last 10 term ratios, safety factor 10.
    Real term_prev(0);
    std::array<Real, 10> window;
    size_t filled = 0, pos = 0;
    Real ezd = pow(ez, 15);
    for (int d = 16; d <= dmax; ++d) {
        ezd *= ez;
        Real term = coefficient(d, deriv_order) * ezd;
        if (term_prev > 0) {
            window[pos] = term / term_prev;
            pos = (pos + 1) % window.size();
            filled = std::min(filled + 1, window.size());
            if (filled == window.size()) {
                Real q_max(0);
                for (const auto& q : window) {
                    if (q > q_max) q_max = q;
                }
                if (q_max >= Real(99) / 100) {
                    throw TailAccuracyError("term ratios too close to 1 near the singularity");
                }
                Real tail_est = 10 * term * q_max / (1 - q_max);
                if (tail_est < abs_err) {
                    return d;
                }
            }
        }
        term_prev = term;
    }
    throw TailAccuracyError("table too short for the requested accuracy");
}

Real F0Evaluator::eval(const Real& z, int deriv_order, const Real& abs_err) const {
    if (deriv_order < 0 || deriv_order > 3) {
        throw std::invalid_argument("derivative order must be 0..3");
    }
    if (abs_err <= 0) {
        throw std::invalid_argument("abs_err must be positive");
    }
    if (z >= domain_limit_) {
        throw std::invalid_argument("evaluation point too close to the singularity");
    }
    PrecisionScope scope(bits_ + kEvalGuardBits);
    int D = certified_terms(z, deriv_order, abs_err / 2);
    Real ez = exp(z);
    Real p(1), acc(0);
    for (int d = 1; d <= D; ++d) {
        p *= ez;
        acc += coefficient(d, deriv_order) * p;
    }
    return acc;
}

ComplexReal F0Evaluator::eval(const ComplexReal& z, int deriv_order, const Real& abs_err) const {
    if (deriv_order < 0 || deriv_order > 3) {
        throw std::invalid_argument("derivative order must be 0..3");
    }
    if (abs_err <= 0) {
        throw std::invalid_argument("abs_err must be positive");
    }
    if (z.re >= domain_limit_) {
        throw std::invalid_argument("evaluation point too close to the singularity");
    }
    PrecisionScope scope(bits_ + kEvalGuardBits);
    int D = certified_terms(z.re, deriv_order, abs_err / 2);
    Real er = exp(z.re);
    Real p(1);
    ComplexReal acc{Real(0), Real(0)};
    for (int d = 1; d <= D; ++d) {
        p *= er;
        Real c = coefficient(d, deriv_order) * p;
        Real s, co;
        Real arg = Real(d) * z.im;
        mpfr_sin_cos(s.backend().data(), co.backend().data(), arg.backend().data(), MPFR_RNDN);
        acc.re += c * co;
        acc.im += c * s;
    }
    return acc;
}

} // namespace gwasym
