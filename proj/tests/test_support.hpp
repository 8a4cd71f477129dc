#ifndef GWASYM_TEST_SUPPORT_HPP
#define GWASYM_TEST_SUPPORT_HPP

#include "gwasym/invariants.hpp"
#include "gwasym/scalars.hpp"

#include <random>

namespace gwtest {

using namespace gwasym;

inline const InvariantTable& g0_exact_64() {
    static InvariantTable t = genus0_table(64);
    return t;
}

inline const InvariantTable& g1_exact_64() {
    static InvariantTable t = genus1_table(64, g0_exact_64());
    return t;
}

inline bool close(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol;
}

inline bool rel_close(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol * (abs(a) + abs(b) + 1);
}

/// Small random rationals with denominators up to 6.
inline Rat random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-8, 8);
    std::uniform_int_distribution<int> den(1, 6);
    return Rat(num(rng), den(rng));
}

} // namespace gwtest

#endif
