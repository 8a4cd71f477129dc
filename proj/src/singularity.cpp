#include "gwasym/singularity.hpp"

#include <json.hpp>

#include <stdexcept>

namespace gwasym {

namespace {

// Increasing left side of the series equation at truncation D.
Real partial_sum(const InvariantTable& g0, int D, const Real& x) {
    Real ex = exp(x);
    Real p(1), acc(0);
    for (int d = 1; d <= D; ++d) {
        p *= ex;
        acc += Real(d) * (3 * d - 2) * g0.value(d) * p;
    }
    return acc;
}

// Solve a small dense linear system in place (partial pivoting).
std::vector<Real> solve_linear(std::vector<std::vector<Real>> A, std::vector<Real> b) {
    size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r) {
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        }
        if (A[piv][col] == 0) {
            throw std::runtime_error("singular extrapolation system");
        }
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < n; ++r) {
            Real f = A[r][col] / A[col][col];
            for (size_t cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<Real> x(n, Real(0));
    for (size_t r = n; r-- > 0;) {
        Real acc = b[r];
        for (size_t cc = r + 1; cc < n; ++cc) acc -= A[r][cc] * x[cc];
        x[r] = acc / A[r][r];
    }
    return x;
}

} // namespace

std::pair<Real, Real> x0_bracket() {
    return {log(Real(15) / 4), log(Real(27))};
}

Real x0_from_flow(const EventResult& ev) {
    Real x0 = ev.state.z;
    auto [lo, hi] = x0_bracket();
    if (x0 < lo || x0 > hi) {
        throw std::runtime_error("flow singularity abscissa outside the a-priori bracket");
    }
    return x0;
}

Real x0_series_single(const InvariantTable& g0, int D) {
    if (D < 1 || D > g0.dmax()) {
        throw std::invalid_argument("truncation outside the table range");
    }
    auto [lo, hi] = x0_bracket();
    // For D = 1 the root of (1/2) e^x = 27 lies above ln 27; widen upward.
    hi = log(Real(54)) + 1;
    // Bisect to a tight bracket, then Newton. The left side is increasing
    // and convex in x, so Newton from above converges monotonically.
    if (partial_sum(g0, D, lo) >= 27 || partial_sum(g0, D, hi) <= 27) {
        throw std::runtime_error("series root not bracketed");
    }
    for (int i = 0; i < 20; ++i) {
        Real mid = (lo + hi) / 2;
        if (partial_sum(g0, D, mid) < 27) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Real x = hi;
    Real tol = pow2(-static_cast<long>(working_precision_bits()) + 8);
    for (int i = 0; i < 200; ++i) {
        Real ex = exp(x);
        Real p(1), f(0), fp(0);
        for (int d = 1; d <= D; ++d) {
            p *= ex;
            Real term = Real(d) * (3 * d - 2) * g0.value(d) * p;
            f += term;
            fp += d * term;
        }
        Real step = (f - 27) / fp;
        x -= step;
        if (abs(step) < tol * (1 + abs(x))) {
            return x;
        }
    }
    throw std::runtime_error("series root iteration failed to converge");
}

Real x0_from_series(const InvariantTable& g0, const std::vector<int>& d_list) {
    if (d_list.size() < 3) {
        throw std::invalid_argument("x0_from_series needs at least three truncations");
    }
    for (size_t i = 1; i < d_list.size(); ++i) {
        if (d_list[i] <= d_list[i - 1]) {
            throw std::invalid_argument("truncation list must be increasing");
        }
    }
    std::vector<Real> roots;
    roots.reserve(d_list.size());
    for (int D : d_list) {
        roots.push_back(x0_series_single(g0, D));
    }
    for (size_t i = 1; i < roots.size(); ++i) {
        if (!(roots[i] < roots[i - 1])) {
            throw std::runtime_error("series roots not decreasing; table looks corrupted");
        }
    }
    // Fit x(D) = x0 + sum_j alpha_j D^{-(2+j)/2} on the last points. The
    // truncation tail scales like D^{-1/2} but enters through a derivative
    // growing like D^{1/2}, so the bias expansion starts at D^{-1}.
    size_t pts = std::min<size_t>(4, roots.size());
    size_t off = roots.size() - pts;
    std::vector<std::vector<Real>> A(pts, std::vector<Real>(pts, Real(0)));
    std::vector<Real> rhs(pts);
    for (size_t i = 0; i < pts; ++i) {
        Real D(d_list[off + i]);
        A[i][0] = 1;
        for (size_t j = 1; j < pts; ++j) {
            A[i][j] = pow(D, -Real(2 + (j - 1)) / 2);
        }
        rhs[i] = roots[off + i];
    }
    return solve_linear(std::move(A), std::move(rhs))[0];
}

std::vector<Real> cprime_from_local(const EventResult& ev, int K) {
    if (ev.local_z.order() < K + 2) {
        throw std::invalid_argument("cprime_from_local needs local order >= K + 2");
    }
    PuiseuxSeries<Real> tau = revert_even(ev.local_z, 100 * ev.event_tol);
    PuiseuxSeries<Real> w = puiseux_compose_poly(ev.local_w, tau);
    if (w.kmax < K) {
        throw std::runtime_error("composed branch too short");
    }
    std::vector<Real> cp(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) cp[static_cast<size_t>(k)] = w.coeff(k);
    return cp;
}

std::pair<Real, Real> boundary_values(const EventResult& ev) {
    const FlowState& s = ev.state;
    Real f0p = 3 * s.w - s.y;
    Real f0 = (s.x + 18 * s.w - 9 * s.y) / 2;
    return {f0, f0p};
}

std::vector<Real> genus0_coeffs(const std::vector<Real>& cprime, int n_terms) {
    if (n_terms < 4) {
        throw std::invalid_argument("genus-0 model needs n_terms >= 4");
    }
    if (static_cast<int>(cprime.size()) < 2 * (n_terms - 1) - 4) {
        throw std::invalid_argument("cprime too short for the requested terms");
    }
    Real pi = pi_value();
    std::vector<Real> a;
    a.reserve(static_cast<size_t>(n_terms) - 3);
    for (int k = 3; k <= n_terms - 1; ++k) {
        Real v = 4 * gamma_half_integer(static_cast<unsigned>(k)) *
                 cprime[static_cast<size_t>(2 * k - 5)] /
                 (pi * (2 * k - 1) * (2 * k - 3));
        if (k % 2 != 0) v = -v;
        a.push_back(v);
    }
    if (!(a[0] > 0)) {
        throw std::domain_error("leading genus-0 expansion coefficient must be positive");
    }
    return a;
}

Genus1Coeffs genus1_coeffs(const std::vector<Real>& cprime, const Real& f0prime, int n_terms,
                           const Real& tol) {
    Genus1Coeffs out;
    out.gprime = genus1_gprime_series<Real>(cprime, f0prime, tol);
    if (out.gprime.m != -2) {
        throw std::domain_error("genus-1 quotient does not start at s^{-1}");
    }
    Real lead = out.gprime.coeff(-2);
    if (abs(lead - Real(1) / 48) > tol) {
        throw std::domain_error("genus-1 quotient leading coefficient is not 1/48");
    }
    if (out.gprime.kmax < 2 * (n_terms - 1) - 1) {
        throw std::invalid_argument("cprime too short for the requested genus-1 terms");
    }
    Real pi = pi_value();
    out.a1.reserve(static_cast<size_t>(n_terms));
    for (int k = 0; k <= n_terms - 1; ++k) {
        Real v = gamma_half_integer(static_cast<unsigned>(k)) * out.gprime.coeff(2 * k - 1) / pi;
        if (k % 2 != 0) v = -v;
        out.a1.push_back(v);
    }
    return out;
}

SingularityOptions SingularityOptions::defaults(unsigned precision_bits) {
    SingularityOptions o;
    o.precision_bits = precision_bits;
    o.z_init = -30;
    o.integration = IntegrationOptions::defaults(precision_bits);
    o.cross_tol = Real(1) / 100000000;
    o.gprime_tol = pow(Real(10), -10);
    return o;
}

SingularityReport build_singularity_report(const InvariantTable& g0,
                                           const SingularityOptions& opt) {
    PrecisionScope scope(opt.precision_bits);
    SingularityReport r;
    r.precision_bits = opt.precision_bits;
    r.local_order = opt.local_order;
    r.n_terms = opt.n_terms;
    r.z_init = opt.z_init;
    r.event_tol = opt.integration.event_tol;

    IntegrationOptions integ = opt.integration;
    integ.local_series_order = std::max(opt.local_order, 2 * opt.n_terms + 8);

    Real eps = exp(r.z_init) * integ.local_tol;
    FlowState s0;
    {
        PrecisionScope init_scope(opt.precision_bits + integ.guard_bits);
        s0 = init_state(Real(r.z_init), g0, eps);
    }
    EventResult ev = integrate_to_event(s0, integ);

    r.x0 = x0_from_flow(ev);
    r.b = ev.local_z.c;
    r.c = ev.local_w.c;
    auto [f0, f0p] = boundary_values(ev);
    r.F0_at_x0 = f0;
    r.F0prime_at_x0 = f0p;

    int kc = integ.local_series_order - 3;
    r.cprime = cprime_from_local(ev, kc);
    if (!(r.cprime[1] < 0)) {
        throw std::domain_error("c'_1 must be negative on the real branch");
    }
    Real event_defect = abs(27 + 2 * f0p - 3 * r.cprime[0]);
    if (event_defect > pow2(-static_cast<long>(opt.precision_bits) / 2 + 8)) {
        throw std::domain_error("boundary values inconsistent with the event condition");
    }

    r.a0 = genus0_coeffs(r.cprime, opt.n_terms);
    Genus1Coeffs g1 = genus1_coeffs(r.cprime, f0p, opt.n_terms, opt.gprime_tol);
    r.a1 = g1.a1;
    r.gprime_min_index = g1.gprime.m;
    int gtop = std::min(g1.gprime.kmax, g1.gprime.m + 2 * opt.n_terms + 2);
    for (int k = g1.gprime.m; k <= gtop; ++k) {
        r.gprime.push_back(g1.gprime.coeff(k));
    }

    r.x0_alt = x0_from_series(g0, opt.d_list);
    r.x0_cross_diff = abs(r.x0 - r.x0_alt);
    if (r.x0_cross_diff > opt.cross_tol) {
        throw std::runtime_error("flow and series singularity estimates disagree");
    }
    return r;
}

namespace {

nlohmann::json reals_to_json(const std::vector<Real>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(real_to_decimal(x));
    return a;
}

std::vector<Real> reals_from_json(const nlohmann::json& a) {
    std::vector<Real> v;
    v.reserve(a.size());
    for (const auto& s : a) v.push_back(real_from_decimal(s.get<std::string>()));
    return v;
}

} // namespace

std::string report_to_json(const SingularityReport& r) {
    nlohmann::json j;
    j["x0"] = real_to_decimal(r.x0);
    j["x0_alt"] = real_to_decimal(r.x0_alt);
    j["x0_cross_diff"] = real_to_decimal(r.x0_cross_diff);
    j["b"] = reals_to_json(r.b);
    j["c"] = reals_to_json(r.c);
    j["cprime"] = reals_to_json(r.cprime);
    j["gprime"] = reals_to_json(r.gprime);
    j["gprime_min_index"] = r.gprime_min_index;
    j["a0"] = reals_to_json(r.a0);
    j["a1"] = reals_to_json(r.a1);
    j["F0_at_x0"] = real_to_decimal(r.F0_at_x0);
    j["F0prime_at_x0"] = real_to_decimal(r.F0prime_at_x0);
    j["precision_bits"] = r.precision_bits;
    j["local_order"] = r.local_order;
    j["n_terms"] = r.n_terms;
    j["z_init"] = real_to_decimal(r.z_init);
    j["event_tol"] = real_to_decimal(r.event_tol);
    return j.dump(2);
}

SingularityReport report_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SingularityReport r;
    r.precision_bits = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(r.precision_bits);
    r.x0 = real_from_decimal(j.at("x0").get<std::string>());
    r.x0_alt = real_from_decimal(j.at("x0_alt").get<std::string>());
    r.x0_cross_diff = real_from_decimal(j.at("x0_cross_diff").get<std::string>());
    r.b = reals_from_json(j.at("b"));
    r.c = reals_from_json(j.at("c"));
    r.cprime = reals_from_json(j.at("cprime"));
    r.gprime = reals_from_json(j.at("gprime"));
    r.gprime_min_index = j.at("gprime_min_index").get<int>();
    r.a0 = reals_from_json(j.at("a0"));
    r.a1 = reals_from_json(j.at("a1"));
    r.F0_at_x0 = real_from_decimal(j.at("F0_at_x0").get<std::string>());
    r.F0prime_at_x0 = real_from_decimal(j.at("F0prime_at_x0").get<std::string>());
    r.local_order = j.at("local_order").get<int>();
    r.n_terms = j.at("n_terms").get<int>();
    r.z_init = real_from_decimal(j.at("z_init").get<std::string>());
    r.event_tol = real_from_decimal(j.at("event_tol").get<std::string>());
    return r;
}

} // namespace gwasym
