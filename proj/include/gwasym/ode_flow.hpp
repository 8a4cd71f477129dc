#ifndef GWASYM_ODE_FLOW_HPP
#define GWASYM_ODE_FLOW_HPP

#include "gwasym/f0_evaluator.hpp"
#include "gwasym/invariants.hpp"
#include "gwasym/scalars.hpp"
#include "gwasym/series.hpp"

#include <array>
#include <vector>

namespace gwasym {

// State of the autonomous flow in the transformed variables. Along
// admissible trajectories x, y, w, z and 2y - 3w increase monotonically, and
// z stalls exactly when 2y - 3w reaches 27.
struct FlowState {
    Real t, x, y, w, z;

    Real u() const { return 2 * y - 3 * w; }
};

/// Right-hand side (x', y', w', z') of the flow.
std::array<Real, 4> vector_field(const FlowState& s);

/// Taylor coefficients of the solution through the given state, orders 0..K.
/// Generated by the standard recurrence for polynomial fields.
std::array<TruncatedSeries<Real>, 4> taylor_expansion(const FlowState& s, int order);

class EventNotReached : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegrationOptions {
    int taylor_order = 30;
    Real event_tol;      // |2y - 3w - 27| target at the event
    Real local_tol;      // per-step truncation target (relative to state scale)
    Real h_max;          // step-size cap
    Real t_horizon;      // give up if the event is not reached by this time
    long max_steps = 1000000;
    int local_series_order = 24;  // order of the reported local expansion
    unsigned guard_bits = 64;     // extra working precision inside the integrator

    static IntegrationOptions defaults(unsigned precision_bits);
};

// One accepted step of the integration, kept for a-posteriori checks: the
// state after the step, the step-local error estimate, and the residual of
// the monotonicity identity evaluated on the dense polynomial at midstep.
struct StepRecord {
    Real t_start;
    Real h;
    Real error_estimate;
    Real identity_residual;
    FlowState end_state;
};

struct EventResult {
    Real t1;
    FlowState state;  // state.t == t1
    TruncatedSeries<Real> local_x, local_y, local_w, local_z;
    unsigned precision_bits = 0;
    Real z_init;
    Real event_tol, local_tol;
    std::vector<StepRecord> steps;

    const Real& x0() const { return state.z; }
};

/// Initial state on the trajectory at height z_init (deep in the convergent
/// region, z_init <= -5), with series evaluated to absolute error <= eps.
/// The time origin is fixed at t = 0 here; the flow is autonomous.
FlowState init_state(const Real& z_init, const InvariantTable& g0, const Real& eps);

/// Integrate until 2y - 3w = 27, refine the event time by bisection plus
/// Newton on the dense Taylor polynomial, and expand the solution there.
EventResult integrate_to_event(const FlowState& s0, const IntegrationOptions& opt);

/// Local Taylor expansion at an event state with the contract checks:
/// b1 within tolerance, b2 < 0, c1 > 0.
std::array<TruncatedSeries<Real>, 4> local_taylor(const FlowState& state_at_t1, int order,
                                                  const Real& b1_tol);

std::string event_to_json(const EventResult& ev);

} // namespace gwasym

#endif
