#ifndef GWASYM_SERIES_JSON_HPP
#define GWASYM_SERIES_JSON_HPP

#include "gwasym/series.hpp"

#include <string>

namespace gwasym {

// JSON record {var, min_half_exponent, coeffs, precision_bits}; rational
// coefficients are "num/den" strings, floating ones decimal strings.
// Truncated (integer-exponent) series round-trip through doubled exponents.
std::string series_to_json(const PuiseuxSeries<Rat>& s);
std::string series_to_json(const PuiseuxSeries<Real>& s, unsigned precision_bits);
std::string series_to_json(const TruncatedSeries<Rat>& s);
std::string series_to_json(const TruncatedSeries<Real>& s, unsigned precision_bits);

PuiseuxSeries<Rat> series_rat_from_json(const std::string& text);
PuiseuxSeries<Real> series_real_from_json(const std::string& text);

} // namespace gwasym

#endif
