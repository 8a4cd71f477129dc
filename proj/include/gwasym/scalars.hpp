#ifndef GWASYM_SCALARS_HPP
#define GWASYM_SCALARS_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <optional>
#include <string>

namespace gwasym {

// Exact arbitrary-precision integers and rationals (GMP), and
// variable-precision binary floats (MPFR). Expression templates are off:
// every operation yields a plain value, and mixed-precision operations
// propagate the larger operand precision.
using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Decimal digits needed so the underlying binary precision is >= `bits`.
unsigned digits10_for_bits(unsigned bits);

/// Set the thread's default Real precision to at least `bits` binary digits.
void set_working_precision(unsigned bits);

/// Binary precision a freshly constructed Real receives right now.
unsigned working_precision_bits();

/// RAII guard: set the working precision on entry, restore on exit.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

Real pi_value();
Real sqrt_pi();

/// Gamma(k + 1/2) = sqrt(pi) * (2k-1)!! / 2^k, exact double-factorial product.
Real gamma_half_integer(unsigned k);

/// 2^e as a Real (exact).
Real pow2(long e);

/// Integer power of a rational, exact.
Rat rat_pow(Rat base, unsigned long exp);

/// Exact rational square root, if the operand is a perfect square.
std::optional<Rat> rat_sqrt_exact(const Rat& q);

Real to_real(const Rat& q);
Real to_real(__int128 v);

/// Full-precision decimal string, round-trips at equal or higher precision.
std::string real_to_decimal(const Real& x);
Real real_from_decimal(const std::string& s);

/// Exact hexadecimal significand form ("0x1.8p+1" style).
std::string real_to_hex(const Real& x);
Real real_from_hex(const std::string& s, unsigned bits);

std::string rat_to_string(const Rat& q);           // "num/den" or "num"
Rat rat_from_string(const std::string& s);

} // namespace gwasym

#endif
