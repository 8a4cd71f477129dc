#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "gwasym/f0_evaluator.hpp"

#include <random>

using namespace gwasym;
using gwtest::g0_exact_64;

namespace {

// Deep enough to certify tight budgets close to the singularity.
const InvariantTable& g0_deep() {
    static InvariantTable t = [] {
        InvariantTable tab = genus0_table(64);
        extend_scaled(tab, 2500, 192);
        return tab;
    }();
    return t;
}

} // namespace

TEST_CASE("deep negative arguments are dominated by the first term") {
    set_working_precision(256);
    F0Evaluator ev(g0_exact_64(), 256);
    Real err = pow(Real(10), -30);
    Real v = ev.eval(Real(-50), 0, err);
    CHECK(abs(v) <= exp(Real(-49)));
    // first term is n_{0,1} e^{-50} = e^{-50}/2; the rest is e^{-100}-sized
    CHECK(gwtest::rel_close(v, exp(Real(-50)) / 2, exp(Real(-45))));
    for (int j = 1; j <= 3; ++j) {
        Real vj = ev.eval(Real(-50), j, err);
        CHECK(gwtest::rel_close(vj, exp(Real(-50)) / 2, exp(Real(-45))));
    }
}

TEST_CASE("monotonicity chain on the real axis") {
    set_working_precision(192);
    F0Evaluator ev(g0_deep(), 192);
    ev.set_domain_limit(Real(198) / 100, Real(49) / 1000);
    Real err = pow(Real(10), -30);
    for (int i = 0; i < 20; ++i) {
        // 20 points spanning [-10, 1.93], up against the singularity margin
        Real z = Real(-10) + (Real(1193) / 100) * i / 19;
        Real f0 = ev.eval(z, 0, err);
        Real f1 = ev.eval(z, 1, err);
        Real f2 = ev.eval(z, 2, err);
        Real f3 = ev.eval(z, 3, err);
        REQUIRE(f0 > 0);
        REQUIRE(f1 > f0);
        REQUIRE(f2 > f1);
        REQUIRE(f3 > f2);
        REQUIRE(27 + 2 * f1 - 3 * f2 > 0);
    }
}

TEST_CASE("periodicity under a full imaginary turn") {
    set_working_precision(192);
    F0Evaluator ev(g0_exact_64(), 192);
    Real err = pow(Real(10), -35);
    Real z = -3;
    Real direct = ev.eval(z, 0, err);
    ComplexReal shifted = ev.eval(ComplexReal{z, 2 * pi_value()}, 0, err);
    CHECK(gwtest::close(shifted.re, direct, 3 * err));
    CHECK(gwtest::close(shifted.im, Real(0), 3 * err));
}

TEST_CASE("halving the budget never moves the value by more than the budget") {
    set_working_precision(192);
    F0Evaluator ev(g0_deep(), 192);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> zd(-10.0, 1.2);
    for (int iter = 0; iter < 40; ++iter) {
        Real z(zd(rng));
        Real err = pow(Real(10), -6 - static_cast<int>(rng() % 20));
        int order = static_cast<int>(rng() % 4);
        Real a = ev.eval(z, order, err);
        Real b = ev.eval(z, order, err / 2);
        REQUIRE(abs(a - b) <= err);
    }
}

TEST_CASE("error paths") {
    set_working_precision(128);
    F0Evaluator ev(g0_exact_64(), 128);
    CHECK_THROWS_AS(ev.eval(Real(0), 4, Real(1)), std::invalid_argument);
    CHECK_THROWS_AS(ev.eval(Real(0), 0, Real(0)), std::invalid_argument);
    CHECK_THROWS_AS(ev.eval(Real(4), 0, Real(1)), std::invalid_argument);
    // close to the singularity, the table cannot certify arbitrarily tight budgets
    CHECK_THROWS_AS(ev.eval(Real(19) / 10, 0, pow(Real(10), -30)), TailAccuracyError);
    F0Evaluator deep(g0_deep(), 192);
    CHECK_THROWS_AS(deep.eval(Real(19) / 10, 0, pow2(-400)), TailAccuracyError);
    ev.set_domain_limit(Real(198) / 100, Real(1) / 20);
    CHECK_THROWS_AS(ev.eval(Real(195) / 100, 0, Real(1)), std::invalid_argument);
}
