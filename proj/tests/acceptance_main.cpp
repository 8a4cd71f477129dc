// Acceptance suite: runs every top-level correctness criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failures.

#include "gwasym/asymptotics.hpp"
#include "gwasym/f0_evaluator.hpp"
#include "gwasym/invariants.hpp"
#include "gwasym/ode_flow.hpp"
#include "gwasym/series.hpp"
#include "gwasym/singularity.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

using namespace gwasym;

namespace {

int g_failures = 0;

double now_s() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void report(const std::string& id, bool pass, const std::string& detail, double seconds) {
    if (!pass) ++g_failures;
    std::ostringstream line;
    line << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail << "  (" << std::fixed;
    line.precision(1);
    line << seconds << " s)";
    std::cout << line.str() << std::endl;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(5);
    os << v;
    return os.str();
}

EventResult run_flow(const InvariantTable& g0, unsigned bits, int z_init) {
    PrecisionScope scope(bits);
    IntegrationOptions opt = IntegrationOptions::defaults(bits);
    FlowState s0;
    {
        PrecisionScope init_scope(bits + opt.guard_bits);
        s0 = init_state(Real(z_init), g0, exp(Real(z_init)) * opt.local_tol);
    }
    return integrate_to_event(s0, opt);
}

Rat random_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-8, 8);
    std::uniform_int_distribution<int> den(1, 6);
    return Rat(num(rng), den(rng));
}

} // namespace

int main() {
    const unsigned kBits = 256;
    const int kDexact = 200;
    const int kDfloat = 5000;
    set_working_precision(kBits);

    // ---- exact small-degree fixtures -------------------------------------
    double t0 = now_s();
    {
        InvariantTable g0 = genus0_table(3);
        InvariantTable g1 = genus1_table(3, g0);
        bool pass = g0.exact_at(1) == Rat(1, 2) && g0.exact_at(2) == Rat(1, 120) &&
                    g0.exact_at(3) == Rat(1, 3360) && g1.exact_at(1) == 0 &&
                    g1.exact_at(2) == 0 && g1.exact_at(3) == Rat(1, 362880);
        double dt = now_s() - t0;
        report("C1 exact small-degree values", pass && dt < 1.0,
               "n01..n03, n11..n13 exact", dt);
    }

    // ---- shared artifacts --------------------------------------------------
    t0 = now_s();
    InvariantTable g0 = genus0_table(kDexact);
    InvariantTable g1 = genus1_table(kDexact, g0);
    std::cout << "[info] exact tables to " << kDexact << " in " << fmt(now_s() - t0) << " s\n";

    // ---- associativity residual -------------------------------------------
    t0 = now_s();
    {
        WdvvResidual res = verify_wdvv_series(g0, 60);
        report("C2 associativity residual", res.zero(),
               res.zero() ? "exact zero through order 60"
                          : "nonzero at order " + std::to_string(res.first_nonzero),
               now_s() - t0);
    }

    // ---- sandwich bounds ----------------------------------------------------
    t0 = now_s();
    {
        auto bad = verify_bounds(g0);
        report("C3 sandwich bounds d<=200", bad.empty(),
               bad.empty() ? "zero violations (exact comparisons)"
                           : std::to_string(bad.size()) + " violations",
               now_s() - t0);
    }

    t0 = now_s();
    extend_scaled(g0, kDfloat, kBits);
    extend_scaled(g1, kDfloat, kBits, &g0);
    std::cout << "[info] scaled tables to " << kDfloat << " in " << fmt(now_s() - t0) << " s\n";

    // ---- flows ---------------------------------------------------------------
    t0 = now_s();
    EventResult ev30 = run_flow(g0, kBits, -30);
    EventResult ev25 = run_flow(g0, kBits, -25);
    EventResult ev40 = run_flow(g0, kBits, -40);
    EventResult ev128 = run_flow(g0, 128, -30);
    std::cout << "[info] four event integrations in " << fmt(now_s() - t0) << " s\n";
    PrecisionScope main_scope(kBits);

    // ---- singularity abscissa, two methods -----------------------------------
    t0 = now_s();
    Real x0 = x0_from_flow(ev30);
    {
        Real x0s = x0_from_series(g0, {625, 1250, 2500, 5000});
        auto [lo, hi] = x0_bracket();
        double cross = abs(x0 - x0s).convert_to<double>();
        double doubling = abs(x0 - ev128.state.z).convert_to<double>();
        double thresh = pow2(-100).convert_to<double>();
        bool pass = cross <= 1e-8 && x0 > lo && x0 < hi && x0s > lo && x0s < hi &&
                    doubling <= thresh;
        report("C4 singularity cross-validation", pass,
               "flow vs series " + fmt(cross) + ", 128->256 bit shift " + fmt(doubling) +
                   " (budget " + fmt(thresh) + ")",
               now_s() - t0);
    }

    // ---- structural constants -------------------------------------------------
    t0 = now_s();
    std::vector<Real> cprime = cprime_from_local(ev30, 21);
    auto [F0v, F0p] = boundary_values(ev30);
    std::vector<Real> a0 = genus0_coeffs(cprime, 8);
    Genus1Coeffs g1c = genus1_coeffs(cprime, F0p, 8, Real(1) / 10000000000LL);
    {
        double lead_err = abs(g1c.gprime.coeff(-2) - Real(1) / 48).convert_to<double>();
        bool pass = lead_err <= 1e-10 && cprime[1] < 0 && a0[0] > 0;
        report("C5 structural constants", pass,
               "|g'_{-2} - 1/48| = " + fmt(lead_err) + ", c'_1 = " +
                   fmt(cprime[1].convert_to<double>()) + " < 0, a0_3 = " +
                   fmt(a0[0].convert_to<double>()) + " > 0",
               now_s() - t0);
    }

    // ---- genus-0 asymptotics ----------------------------------------------------
    t0 = now_s();
    {
        double worst = 0;
        for (int d = 2000; d <= kDfloat; ++d) {
            Real ratio = exp(g0.log_value(d) + x0 * d + Real(7) / 2 * log(Real(d))) / a0[0];
            double dev = abs(ratio - 1).convert_to<double>();
            if (dev > worst) worst = dev;
        }
        bool pass = worst <= 0.01;
        std::string detail = "max |ratio - 1| = " + fmt(worst) + " on [2000, 5000]";
        for (int N : {4, 5, 6}) {
            AsymptoticModel m = AsymptoticModel::genus0(
                x0, std::vector<Real>(a0.begin(), a0.begin() + (N - 3)));
            OrderFit fit = residual_order_fit(g0, m, kDfloat / 2, kDfloat);
            bool ok = std::abs(fit.slope + (N + 0.5)) <= 0.25;
            pass = pass && ok;
            detail += "; N=" + std::to_string(N) + " slope " + fmt(fit.slope);
        }
        report("C6 genus-0 expansion", pass, detail, now_s() - t0);
    }

    // ---- genus-1 asymptotics ----------------------------------------------------
    t0 = now_s();
    {
        double worst = 0;
        for (int d = 500; d <= kDfloat; ++d) {
            Real ratio = 48 * Real(d) * exp(g1.log_value(d) + x0 * d);
            double dev = abs(ratio - 1).convert_to<double>();
            if (dev > worst) worst = dev;
        }
        OrderFit decay = fit_genus1_gap_decay(g1, x0, 500, kDfloat);
        bool pass = worst <= 0.10 && std::abs(decay.slope + 0.5) <= 0.25;
        std::string detail = "max |48 d e^{d x0} n - 1| = " + fmt(worst) + ", gap slope " +
                             fmt(decay.slope);
        for (int N : {1, 2}) {
            AsymptoticModel m = AsymptoticModel::genus1(
                x0, std::vector<Real>(g1c.a1.begin(), g1c.a1.begin() + N));
            OrderFit fit = residual_order_fit(g1, m, kDfloat / 2, kDfloat);
            bool ok = std::abs(fit.slope + (N + 1.5)) <= 0.25;
            pass = pass && ok;
            detail += "; N=" + std::to_string(N) + " slope " + fmt(fit.slope);
        }
        report("C7 genus-1 expansion", pass, detail, now_s() - t0);
    }

    // ---- d-th root convergence ---------------------------------------------------
    t0 = now_s();
    {
        RootConvergence rc = root_convergence(g0, g1, x0, kDfloat / 2, kDfloat);
        bool pass = !rc.degenerate && rc.gaps_decreasing && rc.gap0_at_end < 1e-2 &&
                    rc.gap1_at_end < 1e-2 && rc.cross_at_end < 1e-2;
        report("C8 d-th root convergence", pass,
               "gaps at dmax: " + fmt(rc.gap0_at_end) + ", " + fmt(rc.gap1_at_end) + ", " +
                   fmt(rc.cross_at_end) + (rc.gaps_decreasing ? ", strictly decreasing" : ""),
               now_s() - t0);
    }

    // ---- flow trajectory invariants ------------------------------------------------
    t0 = now_s();
    {
        bool identity_ok = true, monotone_ok = true;
        const StepRecord* prev = nullptr;
        for (const auto& r : ev30.steps) {
            identity_ok = identity_ok && r.identity_residual <= 10 * r.error_estimate;
            if (prev) {
                monotone_ok = monotone_ok && r.end_state.x >= prev->end_state.x &&
                              r.end_state.y >= prev->end_state.y &&
                              r.end_state.w >= prev->end_state.w &&
                              r.end_state.z >= prev->end_state.z &&
                              r.end_state.u() >= prev->end_state.u();
            }
            prev = &r;
        }

        // checkpoints well before the event vs the direct series evaluation
        F0Evaluator eval(g0, kBits);
        eval.set_domain_limit(x0, Real(1) / 100);
        std::vector<const StepRecord*> early;
        for (const auto& r : ev30.steps) {
            if (r.end_state.u() <= 2) early.push_back(&r);
        }
        Real budget = ev30.event_tol / 100;
        Real bound = 1000 * ev30.event_tol;
        bool checkpoints_ok = early.size() >= 10;
        double worst_dev = 0;
        for (size_t i = 0; i < 10 && checkpoints_ok; ++i) {
            const FlowState& s = early[early.size() * i / 10]->end_state;
            Real f0 = eval.eval(s.z, 0, budget);
            Real f1 = eval.eval(s.z, 1, budget);
            Real f2 = eval.eval(s.z, 2, budget);
            Real dev = abs(s.x - (9 * f2 - 9 * f1 + 2 * f0));
            dev = std::max(dev, abs(s.y - (3 * f2 - f1)));
            dev = std::max(dev, abs(s.w - f2));
            worst_dev = std::max(worst_dev, dev.convert_to<double>());
            checkpoints_ok = checkpoints_ok && dev <= bound;
        }

        // start-point independence of the singular data
        auto local_quad = [](const EventResult& ev) {
            return std::array<Real, 4>{ev.state.z, ev.local_z[2], ev.local_w[0], ev.local_w[1]};
        };
        auto qa = local_quad(ev25);
        auto qb = local_quad(ev30);
        auto qc = local_quad(ev40);
        double start_dev = 0;
        for (int i = 0; i < 4; ++i) {
            start_dev = std::max(start_dev, abs(qa[i] - qb[i]).convert_to<double>());
            start_dev = std::max(start_dev, abs(qb[i] - qc[i]).convert_to<double>());
            start_dev = std::max(start_dev, abs(qa[i] - qc[i]).convert_to<double>());
        }
        bool start_ok = start_dev <= 1e-20;

        bool pass = identity_ok && monotone_ok && checkpoints_ok && start_ok;
        report("C9 flow invariants", pass,
               std::string("identity residuals ") + (identity_ok ? "ok" : "VIOLATED") +
                   ", monotone " + (monotone_ok ? "ok" : "VIOLATED") +
                   ", checkpoint dev " + fmt(worst_dev) + ", start-independence dev " +
                   fmt(start_dev),
               now_s() - t0);
    }

    // ---- series-kit property suites ---------------------------------------------------
    t0 = now_s();
    {
        std::mt19937_64 rng(11235813);
        bool ring_ok = true;
        for (int iter = 0; iter < 100 && ring_ok; ++iter) {
            int K = 2 + static_cast<int>(rng() % 30);
            auto mk = [&](int order) {
                std::vector<Rat> c(static_cast<size_t>(order) + 1);
                for (auto& v : c) v = random_rat(rng);
                return TruncatedSeries<Rat>{"t", std::move(c)};
            };
            auto a = mk(K), b = mk(K), c = mk(K);
            auto lhs = (a * b) * c;
            auto rhs = a * (b * c);
            for (int k = 0; k <= lhs.order(); ++k) ring_ok = ring_ok && lhs[k] == rhs[k];
            auto dl = a * (b + c);
            auto dr = a * b + a * c;
            for (int k = 0; k <= dl.order(); ++k) ring_ok = ring_ok && dl[k] == dr[k];
        }

        bool revert_ok = true;
        for (int iter = 0; iter < 100 && revert_ok; ++iter) {
            int K = 4 + static_cast<int>(rng() % 9);
            std::vector<Rat> c(static_cast<size_t>(K) + 1, Rat(0));
            c[0] = random_rat(rng);
            c[2] = Rat(-1);
            for (int k = 3; k <= K; ++k) c[k] = random_rat(rng) / 2;
            TruncatedSeries<Rat> z{"tau", std::move(c)};
            auto tau = revert_even(z, Rat(0));
            auto composed = puiseux_compose_poly(z, tau);
            revert_ok = revert_ok && composed.coeff(0) == z[0] && composed.coeff(2) == -1;
            for (int k = 1; k <= composed.kmax && revert_ok; ++k) {
                if (k == 2) continue;
                revert_ok = revert_ok && composed.coeff(k) == 0;
            }
        }

        bool division_ok = true;
        for (int iter = 0; iter < 100 && division_ok; ++iter) {
            std::uniform_int_distribution<int> mdist(-4, 3);
            auto mkp = [&](int m) {
                std::vector<Rat> g(3 + rng() % 5);
                for (auto& v : g) v = random_rat(rng);
                if (g[0] == 0) g[0] = 1;
                int top = m + static_cast<int>(g.size()) - 1;
                return PuiseuxSeries<Rat>{"s", m, std::move(g), top + 3};
            };
            auto a = mkp(mdist(rng));
            auto b = mkp(mdist(rng));
            auto q = puiseux_div(a, b);
            division_ok = division_ok && q.m == a.normalized().m - b.normalized().m &&
                          q.coeff(q.m) == a.normalized().g[0] / b.normalized().g[0];
            auto back = puiseux_mul(q, b);
            for (int k = a.normalized().m; k <= back.kmax && division_ok; ++k) {
                division_ok = division_ok && back.coeff(k) == a.coeff(k);
            }
        }

        bool pass = ring_ok && revert_ok && division_ok;
        report("C10 series property suites", pass,
               std::string("ring ") + (ring_ok ? "ok" : "FAILED") + ", reversion " +
                   (revert_ok ? "ok" : "FAILED") + ", puiseux division " +
                   (division_ok ? "ok" : "FAILED") + " (100 randomized cases each, exact)",
               now_s() - t0);
    }

    std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: FAILURES present")
              << std::endl;
    return g_failures;
}
