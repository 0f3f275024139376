#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fg/operators.hpp"

namespace fg {

/// Time-integration settings for the explicit CFL-adaptive Euler scheme.
struct EvolveConfig {
    double cfl_safety = 0.4;   ///< in (0, 1]
    double t_end = 1.0;
    double dt_min = 1e-16;     ///< below this the step is refused
    double grad_cap = 1e4;     ///< blowup guard on the max difference quotient
    double record_every = 0.1; ///< snapshot cadence (t units; s units when rescaled)
    bool rescaled = false;
    double steady_tol = 1e-8;  ///< sup-norm drift per unit s declaring a steady state
    bool allow_zero_init = false;
    /// Boundary Lipschitz constant of the no-boundary-loss monitor; the
    /// monitor fires when the boundary quotient exceeds
    /// 2 L1 (1+t)^(-1/(p-2)) for t >= 1. Infinity disables it.
    double boundary_L1 = std::numeric_limits<double>::infinity();
};

/// Which source term the stepper applies.
enum class SourceMode {
    Physical,            ///< |grad u|^q
    RescaledDecaying,    ///< e^(-(q-p+1)s/(p-2)) |grad v|^q plus v/(p-2)
    RescaledFrozenGiant, ///< |grad v|^(p-1) plus v/(p-2) (prefactor frozen at 1)
    RescaledPure         ///< no gradient source, v/(p-2) only
};

enum class EventKind { BoundaryLoss, BlowupGuard, SteadyState };

struct Event {
    EventKind kind;
    double time = 0.0;
    int node = -1;      ///< arg-max node for the blowup guard
    double value = 0.0; ///< slope / drift that triggered the event
};

/// Ordered snapshots plus at most one terminal event.
struct Trajectory {
    std::vector<Field> snapshots;
    std::vector<Event> events;

    const Field& back() const { return snapshots.back(); }
    bool has_event(EventKind k) const {
        for (const auto& e : events)
            if (e.kind == k) return true;
        return false;
    }
};

/// CFL-admissible step proposal for the current field state:
/// cfl_safety * min(h^2 / (2 (p-1) M^(p-2)), h / (q M^(q-1))) with M the
/// largest face slope magnitude. Infinite when M = 0 (no constraint).
double propose_dt(const Field& u, const Params& params, const EvolveConfig& cfg,
                  SourceMode mode = SourceMode::Physical);

/// One explicit Euler update with the given dt; boundary values stay 0 by
/// construction. Exposed for property tests; evolve() drives it.
Field step_with_dt(const Field& u, double dt, const Params& params, const SchemeConfig& scheme,
                   SourceMode mode = SourceMode::Physical);

/// One adaptive step: dt = min(propose_dt, dt_cap). Throws StepTooSmall when
/// the admissible step falls below cfg.dt_min, and DomainError if no finite
/// bound exists (zero field with an unbounded cap).
std::pair<Field, double> step(const Field& u, const Params& params, const EvolveConfig& cfg,
                              const SchemeConfig& scheme,
                              double dt_cap = std::numeric_limits<double>::infinity());

/// Integrates the physical equation du/dt = div(|grad u|^(p-2) grad u) + |grad u|^q
/// from u0 to t_end or a terminal event, recording snapshots at the configured
/// cadence.
Trajectory evolve(const Field& u0, const Params& params, const EvolveConfig& cfg,
                  const SchemeConfig& scheme);

/// Integrates the rescaled flow in s = ln t. A SteadyState event is recorded
/// when the drift between consecutive snapshots falls below steady_tol.
Trajectory evolve_rescaled(const Field& v0, const Params& params, const EvolveConfig& cfg,
                           const SchemeConfig& scheme,
                           SourceMode mode = SourceMode::RescaledDecaying);

/// Integrates two ordered states through a common step sequence
/// (dt = min of the two proposals), so the discrete comparison principle
/// applies step by step. Snapshots of both trajectories share times.
std::pair<Trajectory, Trajectory> evolve_pair(const Field& u0, const Field& w0,
                                              const Params& params, const EvolveConfig& cfg,
                                              const SchemeConfig& scheme);

/// v(s, .) = t^(1/(p-2)) u(t, .), s = ln t. Requires u.time > 0.
Field rescale_to_v(const Field& u, double p);

/// Inverse of rescale_to_v: u(t, .) = t^(-1/(p-2)) v(s, .), t = e^s.
Field rescale_from_v(const Field& v, double p);

} // namespace fg
