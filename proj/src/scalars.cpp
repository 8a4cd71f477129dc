#include "gwasym/scalars.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace gwasym {

unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

void set_working_precision(unsigned bits) {
    if (bits < 16) {
        throw std::invalid_argument("working precision below 16 bits");
    }
    Real::default_precision(digits10_for_bits(bits));
}

unsigned working_precision_bits() {
    Real probe(0);
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(Real::default_precision()) {
    set_working_precision(bits);
}

PrecisionScope::~PrecisionScope() {
    Real::default_precision(saved_digits10_);
}

Real pi_value() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real sqrt_pi() {
    return sqrt(pi_value());
}

Real gamma_half_integer(unsigned k) {
    Real g = sqrt_pi();
    for (unsigned i = 1; i <= k; ++i) {
        g *= 2 * i - 1;
        g /= 2;
    }
    return g;
}

Real pow2(long e) {
    Real r;
    mpfr_set_ui_2exp(r.backend().data(), 1, e, MPFR_RNDN);
    return r;
}

Rat rat_pow(Rat base, unsigned long exp) {
    Rat r = 1;
    while (exp != 0) {
        if (exp & 1UL) {
            r *= base;
        }
        base *= base;
        exp >>= 1;
    }
    return r;
}

std::optional<Rat> rat_sqrt_exact(const Rat& q) {
    if (q < 0) {
        return std::nullopt;
    }
    Int num = numerator(q);
    Int den = denominator(q);
    Int rn = sqrt(num);
    Int rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) {
        return std::nullopt;
    }
    return Rat(rn) / Rat(rd);
}

Real to_real(const Rat& q) {
    return Real(q);
}

Real to_real(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    Real hi(static_cast<unsigned long long>(u >> 64));
    Real r = ldexp(hi, 64) + Real(static_cast<unsigned long long>(u));
    return neg ? -r : r;
}

std::string real_to_decimal(const Real& x) {
    return x.str(0, std::ios_base::scientific);
}

Real real_from_decimal(const std::string& s) {
    return Real(s);
}

std::string real_to_hex(const Real& x) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", x.backend().data());
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

Real real_from_hex(const std::string& s, unsigned bits) {
    PrecisionScope scope(bits);
    Real r(0);
    mpfr_strtofr(r.backend().data(), s.c_str(), nullptr, 16, MPFR_RNDN);
    return r;
}

std::string rat_to_string(const Rat& q) {
    if (denominator(q) == 1) {
        return numerator(q).str();
    }
    return numerator(q).str() + "/" + denominator(q).str();
}

Rat rat_from_string(const std::string& s) {
    return Rat(s);
}

} // namespace gwasym
