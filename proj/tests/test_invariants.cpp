#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "gwasym/invariants.hpp"

#include <stdexcept>

using namespace gwasym;
using gwtest::g0_exact_64;
using gwtest::g1_exact_64;

TEST_CASE("recursion weights") {
    CHECK(kontsevich_weight(1, 1) == Rat(1, 30));
    CHECK(kontsevich_weight(1, 2) == Rat(1, 28));
    CHECK(kontsevich_weight(1, 3) == Rat(1, 30));
    CHECK(kontsevich_weight(2, 2) == Rat(8, 99));
    CHECK_THROWS_AS(kontsevich_weight(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(kontsevich_weight(1, 0), std::invalid_argument);

    for (long long a = 1; a <= 50; ++a) {
        for (long long b = a; b <= 50; ++b) {
            REQUIRE(kontsevich_weight(a, b) == kontsevich_weight(b, a));
        }
    }
}

TEST_CASE("genus-0 table small degrees") {
    InvariantTable t1 = genus0_table(1);
    CHECK(t1.dmax_exact() == 1);
    CHECK(t1.exact_at(1) == Rat(1, 2));

    const InvariantTable& t = g0_exact_64();
    CHECK(t.exact_at(1) == Rat(1, 2));
    CHECK(t.exact_at(2) == Rat(1, 120));
    CHECK(t.exact_at(3) == Rat(1, 3360));
    CHECK(t.exact_at(4) == Rat(31, 1995840));
    CHECK(t.exact_at(5) == Rat(10913, 10897286400LL));

    // the plain curve counts n_{0,d} (3d-1)! are the classical integers
    Int fact = 2;  // (3*1-1)!
    std::vector<Int> expected = {Int(1), Int(1), Int(12), Int(620), Int(87304)};
    for (int d = 1; d <= 5; ++d) {
        if (d > 1) {
            for (int k = 3 * d - 3; k <= 3 * d - 1; ++k) fact *= k;
        }
        Rat count = t.exact_at(d) * Rat(fact);
        CHECK(denominator(count) == 1);
        CHECK(numerator(count) == expected[static_cast<size_t>(d) - 1]);
    }

    for (int d = 1; d <= t.dmax_exact(); ++d) {
        REQUIRE(t.exact_at(d) > 0);
    }
    CHECK_THROWS_AS(genus0_table(0), std::invalid_argument);
}

TEST_CASE("genus-1 table small degrees") {
    const InvariantTable& t = g1_exact_64();
    CHECK(t.exact_at(1) == 0);
    CHECK(t.exact_at(2) == 0);
    CHECK(t.exact_at(3) == Rat(1, 362880));
    CHECK(t.exact_at(4) == Rat(1, 2128896));
    CHECK(t.exact_at(5) == Rat(173, 2594592000LL));

    // (3d)! n_{1,d} gives the classical elliptic counts 1, 225, 87192
    Int f9 = 1;
    for (int k = 2; k <= 9; ++k) f9 *= k;
    CHECK(t.exact_at(3) * Rat(f9) == 1);
    Int f12 = f9 * 10 * 11 * 12;
    CHECK(t.exact_at(4) * Rat(f12) == 225);
    Int f15 = f12 * 13 * 14 * 15;
    CHECK(t.exact_at(5) * Rat(f15) == 87192);

    for (int d = 1; d <= t.dmax_exact(); ++d) {
        REQUIRE(t.exact_at(d) >= 0);
    }
    CHECK_THROWS_AS(genus1_table(10, genus0_table(5)), std::invalid_argument);
}

TEST_CASE("associativity residual vanishes on the computed table") {
    WdvvResidual res = verify_wdvv_series(g0_exact_64(), 40);
    CHECK(res.zero());
    for (int d = 1; d <= 40; ++d) {
        REQUIRE(res.coeffs[static_cast<size_t>(d)] == 0);
    }
}

TEST_CASE("associativity residual locates a perturbed entry") {
    InvariantTable bad = g0_exact_64();
    bad.exact[3] += 1;
    WdvvResidual res = verify_wdvv_series(bad, 20);
    CHECK_FALSE(res.zero());
    CHECK(res.first_nonzero == 3);
}

TEST_CASE("zero series satisfies the associativity identity") {
    InvariantTable zero;
    zero.genus = 0;
    zero.exact.assign(11, Rat(0));
    WdvvResidual res = verify_wdvv_series(zero, 10);
    CHECK(res.zero());
}

TEST_CASE("associativity residual rejects orders beyond the table") {
    CHECK_THROWS_AS(verify_wdvv_series(g0_exact_64(), 65), std::invalid_argument);
}

TEST_CASE("exponential sandwich bounds hold") {
    CHECK(verify_bounds(g0_exact_64()).empty());

    // d = 1, 2 by direct rational arithmetic (squared forms for d^{-7/2})
    CHECK(Rat(1, 27) <= Rat(1, 2));
    CHECK(Rat(1, 2) <= Rat(4, 5));
    Rat sq2 = Rat(1, 120) * Rat(1, 120) * rat_pow(Rat(2), 7);
    CHECK(sq2 * rat_pow(Rat(27), 4) >= 1);
    CHECK(sq2 * rat_pow(Rat(15, 4), 4) <= 9);
}

TEST_CASE("bound violations are located") {
    InvariantTable bad = g0_exact_64();
    bad.exact[7] *= 1000000;
    auto v = verify_bounds(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == 7);

    InvariantTable low = g0_exact_64();
    low.exact[9] /= 1000000;
    v = verify_bounds(low);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == 9);
}

TEST_CASE("bound check covers scaled entries") {
    set_working_precision(128);
    InvariantTable t = genus0_table(8);
    extend_scaled(t, 32, 128);
    CHECK(verify_bounds(t).empty());
    t.scaled[20].log_e += 14.0;  // roughly a 1.2e6 factor
    auto v = verify_bounds(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == 20);
}

TEST_CASE("comparison sequence: unit weight gives Catalan numbers") {
    ComparisonSpec spec{[](int) { return Rat(1); }, Rat(1)};
    ComparisonSequence seq = comparison_sequence(spec, 5);
    CHECK(seq.n[1] == 1);
    CHECK(seq.n[2] == 1);
    CHECK(seq.n[3] == 2);
    CHECK(seq.n[4] == 5);
    CHECK(seq.n[5] == 14);
}

TEST_CASE("comparison sequence: lower weight fixture") {
    ComparisonSequence seq = comparison_sequence(comparison_f1(Rat(1, 2)), 12);
    CHECK(seq.n[2] == Rat(1, 1728));
}

TEST_CASE("comparison sequence rejects bad seeds") {
    CHECK_THROWS_AS(comparison_sequence(comparison_f1(Rat(0)), 4), std::invalid_argument);
    CHECK_THROWS_AS(comparison_sequence(comparison_f1(Rat(-1)), 4), std::invalid_argument);
}

TEST_CASE("catalan numbers") {
    std::vector<long> expect = {1, 1, 2, 5, 14, 42, 132};
    for (size_t k = 0; k < expect.size(); ++k) {
        CHECK(catalan_number(static_cast<unsigned>(k)) == expect[k]);
    }
}

TEST_CASE("weight kernel sandwich between the comparison weights") {
    auto f1 = comparison_f1(Rat(1, 2)).f;
    auto f2 = comparison_f2(Rat(1, 2)).f;
    for (int d = 2; d <= 60; ++d) {
        for (int j = 1; j < d; ++j) {
            Rat T = kontsevich_weight(j, d - j);
            REQUIRE(f1(j) * f1(d - j) / f1(d) <= T);
            REQUIRE(T <= f2(j) * f2(d - j) / f2(d));
        }
    }
}

TEST_CASE("comparison sequences sandwich the invariants") {
    ComparisonSequence lo = comparison_sequence(comparison_f1(Rat(1, 2)), 40);
    ComparisonSequence hi = comparison_sequence(comparison_f2(Rat(1, 2)), 40);
    const InvariantTable& t = g0_exact_64();
    for (int d = 1; d <= 40; ++d) {
        REQUIRE(lo.n[static_cast<size_t>(d)] <= t.exact_at(d));
        REQUIRE(t.exact_at(d) <= hi.n[static_cast<size_t>(d)]);
    }
}

TEST_CASE("scaled tables agree with the exact tables") {
    for (unsigned bits : {128u, 256u}) {
        set_working_precision(bits);
        InvariantTable g0 = genus0_table(48);
        extend_scaled(g0, 48, bits);
        InvariantTable g1 = genus1_table(48, g0);
        extend_scaled(g1, 48, bits, &g0);
        Real tol = pow2(-static_cast<long>(bits) + 8);
        for (int d = 1; d <= 48; ++d) {
            Real ex0 = to_real(g0.exact_at(d));
            REQUIRE(abs(g0.scaled[static_cast<size_t>(d)].value() - ex0) <= tol * ex0);
            if (d >= 3) {
                Real ex1 = to_real(g1.exact_at(d));
                REQUIRE(abs(g1.scaled[static_cast<size_t>(d)].value() - ex1) <= tol * ex1);
            } else {
                REQUIRE(g1.scaled[static_cast<size_t>(d)].is_zero());
            }
        }
    }
}

TEST_CASE("scaled value split round-trips") {
    set_working_precision(192);
    Real v = exp(Real(-12345)) * Real(7) / 3;
    ScaledValue sv = ScaledValue::from_value(v);
    CHECK(gwtest::rel_close(sv.value(), v, pow2(-180)));
    CHECK(abs(sv.mantissa) < 4);
    CHECK(abs(sv.mantissa) > Real(1) / 4);
    ScaledValue z = ScaledValue::from_value(Real(0));
    CHECK(z.is_zero());
    CHECK_THROWS_AS(z.log(), std::domain_error);
}

TEST_CASE("genus-1 scaled recursion needs genus-0 coverage") {
    set_working_precision(128);
    InvariantTable g1 = genus1_table(8, genus0_table(8));
    CHECK_THROWS_AS(extend_scaled(g1, 16, 128), std::invalid_argument);
}
