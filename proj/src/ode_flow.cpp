#include "gwasym/ode_flow.hpp"

#include <json.hpp>

#include <stdexcept>
#include <utility>

namespace gwasym {

namespace {

Real convolve(const std::vector<Real>& a, const std::vector<Real>& b, int k) {
    Real s = 0;
    for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
    return s;
}

struct Coeffs {
    std::vector<Real> x, y, w, z;
    int order;
};

Coeffs expand(const FlowState& s, int K) {
    Coeffs c;
    c.order = K;
    size_t len = static_cast<size_t>(K) + 1;
    c.x.assign(len, Real(0));
    c.y.assign(len, Real(0));
    c.w.assign(len, Real(0));
    c.z.assign(len, Real(0));
    c.x[0] = s.x;
    c.y[0] = s.y;
    c.w[0] = s.w;
    c.z[0] = s.z;
    for (int k = 0; k < K; ++k) {
        Real fx = 27 * c.x[k] + 4 * convolve(c.y, c.y, k);
        Real fy = 9 * c.x[k] + 18 * c.y[k] + 2 * convolve(c.y, c.w, k);
        Real fw = 3 * c.x[k] + 6 * c.y[k] + 9 * c.w[k] + convolve(c.w, c.w, k);
        Real fz = -2 * c.y[k] + 3 * c.w[k];
        if (k == 0) fz += 27;
        c.x[k + 1] = fx / (k + 1);
        c.y[k + 1] = fy / (k + 1);
        c.w[k + 1] = fw / (k + 1);
        c.z[k + 1] = fz / (k + 1);
    }
    return c;
}

Real horner(const std::vector<Real>& c, const Real& h) {
    Real acc = 0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * h + c[k];
    return acc;
}

Real horner_derivative(const std::vector<Real>& c, const Real& h) {
    Real acc = 0;
    for (size_t k = c.size(); k-- > 1;) acc = acc * h + Real(k) * c[k];
    return acc;
}

TruncatedSeries<Real> to_series(const char* var, std::vector<Real> c) {
    return TruncatedSeries<Real>{var, std::move(c)};
}

} // namespace

std::array<Real, 4> vector_field(const FlowState& s) {
    return {27 * s.x + 4 * s.y * s.y,
            9 * s.x + 18 * s.y + 2 * s.y * s.w,
            3 * s.x + 6 * s.y + 9 * s.w + s.w * s.w,
            27 - 2 * s.y + 3 * s.w};
}

std::array<TruncatedSeries<Real>, 4> taylor_expansion(const FlowState& s, int order) {
    if (order < 1) {
        throw std::invalid_argument("taylor_expansion needs order >= 1");
    }
    Coeffs c = expand(s, order);
    return {to_series("tau", std::move(c.x)), to_series("tau", std::move(c.y)),
            to_series("tau", std::move(c.w)), to_series("tau", std::move(c.z))};
}

IntegrationOptions IntegrationOptions::defaults(unsigned precision_bits) {
    IntegrationOptions o;
    long p = static_cast<long>(precision_bits);
    o.event_tol = pow2(-(p - 20));
    // Step-local truncation budget: accumulated over the run and amplified by
    // the expanding flow, the trajectory stays well inside 1000 * event_tol.
    o.local_tol = o.event_tol * pow2(-28);
    o.h_max = Real(1) / 4;
    o.t_horizon = 100;
    return o;
}

FlowState init_state(const Real& z_init, const InvariantTable& g0, const Real& eps) {
    if (!(z_init <= -5)) {
        throw std::invalid_argument("init_state needs z_init <= -5");
    }
    if (!(eps > 0)) {
        throw std::invalid_argument("init_state needs eps > 0");
    }
    F0Evaluator eval(g0, working_precision_bits());
    Real budget = eps / 20;
    Real f0 = eval.eval(z_init, 0, budget);
    Real f1 = eval.eval(z_init, 1, budget);
    Real f2 = eval.eval(z_init, 2, budget);
    FlowState s;
    s.t = 0;
    s.x = 9 * f2 - 9 * f1 + 2 * f0;
    s.y = 3 * f2 - f1;
    s.w = f2;
    s.z = z_init;
    return s;
}

EventResult integrate_to_event(const FlowState& s0, const IntegrationOptions& opt) {
    if (!(s0.u() < 27)) {
        throw std::invalid_argument("integrate_to_event: state already past the event");
    }
    unsigned caller_bits = working_precision_bits();
    PrecisionScope scope(caller_bits + opt.guard_bits);

    const int K = opt.taylor_order;
    if (K < 4) {
        throw std::invalid_argument("taylor order too small");
    }
    FlowState cur = s0;
    EventResult out;
    out.precision_bits = caller_bits;
    out.z_init = s0.z;
    out.event_tol = opt.event_tol;
    out.local_tol = opt.local_tol;

    Real h_min = pow2(-static_cast<long>(caller_bits + opt.guard_bits));
    long n_steps = 0;

    while (true) {
        if (++n_steps > opt.max_steps || cur.t > opt.t_horizon) {
            throw EventNotReached("event 2y - 3w = 27 not reached before the horizon");
        }
        Coeffs c = expand(cur, K);

        // Step size: largest h with the top two Taylor terms below the
        // per-component budget local_tol * scale.
        Real h = opt.h_max;
        for (const auto* comp : {&c.x, &c.y, &c.w, &c.z}) {
            Real scale = 1 + abs((*comp)[0]);
            for (int k : {K - 1, K}) {
                Real ck = abs((*comp)[static_cast<size_t>(k)]);
                if (ck > 0) {
                    Real r = pow(opt.local_tol * scale / ck, Real(1) / k);
                    if (r < h) h = r;
                }
            }
        }
        h *= Real(9) / 10;
        if (h < h_min) {
            throw std::runtime_error("step size underflow; raise the working precision");
        }

        StepRecord rec;
        rec.t_start = cur.t;
        rec.h = h;
        rec.error_estimate = 0;
        for (const auto* comp : {&c.x, &c.y, &c.w, &c.z}) {
            rec.error_estimate += abs((*comp)[static_cast<size_t>(K)]) * pow(h, K) +
                                  abs((*comp)[static_cast<size_t>(K - 1)]) * pow(h, K - 1);
        }

        // Monotonicity identity for u = 2y - 3w along the dense polynomial:
        // u' = 9x + (9 + w) u + 2 w y, checked at midstep.
        {
            Real hm = h / 2;
            Real xm = horner(c.x, hm);
            Real ym = horner(c.y, hm);
            Real wm = horner(c.w, hm);
            Real up = 2 * horner_derivative(c.y, hm) - 3 * horner_derivative(c.w, hm);
            Real um = 2 * ym - 3 * wm;
            rec.identity_residual = abs(up - (9 * xm + (9 + wm) * um + 2 * wm * ym));
        }

        // Event test on the step endpoint.
        Real u_end = 2 * horner(c.y, h) - 3 * horner(c.w, h);
        if (u_end >= 27) {
            // Bracket and polish the root of U(tau) = 2y - 3w - 27 in [0, h].
            std::vector<Real> U(static_cast<size_t>(K) + 1);
            for (int k = 0; k <= K; ++k) {
                U[static_cast<size_t>(k)] = 2 * c.y[static_cast<size_t>(k)] -
                                            3 * c.w[static_cast<size_t>(k)];
            }
            U[0] -= 27;
            Real lo = 0, hi = h;
            for (int i = 0; i < 64; ++i) {
                Real mid = (lo + hi) / 2;
                if (horner(U, mid) < 0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Real tau = (lo + hi) / 2;
            for (int i = 0; i < 10; ++i) {
                Real val = horner(U, tau);
                Real der = horner_derivative(U, tau);
                if (der <= 0) break;
                tau -= val / der;
            }
            if (abs(horner(U, tau)) > opt.event_tol) {
                throw std::runtime_error("event refinement failed to meet the tolerance");
            }
            FlowState ev;
            ev.t = cur.t + tau;
            ev.x = horner(c.x, tau);
            ev.y = horner(c.y, tau);
            ev.w = horner(c.w, tau);
            ev.z = horner(c.z, tau);
            out.t1 = ev.t;
            out.state = ev;
            auto local = local_taylor(ev, opt.local_series_order, 10 * opt.event_tol);
            out.local_x = std::move(local[0]);
            out.local_y = std::move(local[1]);
            out.local_w = std::move(local[2]);
            out.local_z = std::move(local[3]);
            return out;
        }

        cur.t += h;
        cur.x = horner(c.x, h);
        cur.y = horner(c.y, h);
        cur.w = horner(c.w, h);
        cur.z = horner(c.z, h);
        rec.end_state = cur;
        out.steps.push_back(std::move(rec));
    }
}

std::array<TruncatedSeries<Real>, 4> local_taylor(const FlowState& state_at_t1, int order,
                                                  const Real& b1_tol) {
    auto series = taylor_expansion(state_at_t1, order);
    const auto& z = series[3];
    const auto& w = series[2];
    if (abs(z[1]) > b1_tol) {
        throw std::invalid_argument("local_taylor: state does not satisfy the event condition");
    }
    if (!(z[2] < 0)) {
        throw std::domain_error("local_taylor: z'' must be negative at the event");
    }
    if (!(w[1] > 0)) {
        throw std::domain_error("local_taylor: w' must be positive at the event");
    }
    return series;
}

std::string event_to_json(const EventResult& ev) {
    nlohmann::json j;
    j["t1"] = real_to_decimal(ev.t1);
    j["state"] = {{"x", real_to_decimal(ev.state.x)},
                  {"y", real_to_decimal(ev.state.y)},
                  {"w", real_to_decimal(ev.state.w)},
                  {"z", real_to_decimal(ev.state.z)}};
    nlohmann::json b = nlohmann::json::array();
    for (const auto& v : ev.local_z.c) b.push_back(real_to_decimal(v));
    nlohmann::json c = nlohmann::json::array();
    for (const auto& v : ev.local_w.c) c.push_back(real_to_decimal(v));
    j["b"] = std::move(b);
    j["c"] = std::move(c);
    j["precision_bits"] = ev.precision_bits;
    j["z_init"] = real_to_decimal(ev.z_init);
    j["tolerances"] = {{"event_tol", real_to_decimal(ev.event_tol)},
                       {"local_tol", real_to_decimal(ev.local_tol)}};
    return j.dump(2);
}

} // namespace gwasym
