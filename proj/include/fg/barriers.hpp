#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fg/profiles.hpp"

namespace fg {

enum class BarrierKind {
    GlobalExp,              ///< exponential-shell supersolution, q = p-1
    GlobalPower,            ///< power-shell supersolution, q > p-1
    BoundaryExp,            ///< boundary strip barrier, q in [p-1, p)
    BoundaryExpTransformed, ///< boundary strip barrier for the exp-transformed unknown, q = p
    PowerOfProfile,         ///< separate-variables power of the steady profile, q in (p-1, p]
    GiantMultiple           ///< decaying multiple of the steady profile, q > p-1
};

const char* to_string(BarrierKind k);

/// A closed-form supersolution with its named constants. Global and
/// boundary kinds are radial about a point outside the domain; on radial
/// grids they are evaluated through their tightest radial minorant (the
/// far/near point of each sphere), which is again a supersolution of the
/// radial problem. Profile kinds evaluate the stored profile nodewise and
/// are only defined on its grid.
struct BarrierSpec {
    BarrierKind kind = BarrierKind::GlobalExp;
    Params params;
    std::map<std::string, double> constants;
    std::shared_ptr<const Profile> profile; // PowerOfProfile / GiantMultiple
    GridPtr domain;                         // geometry the spec was built for

    double c(const std::string& name) const {
        auto it = constants.find(name);
        if (it == constants.end())
            throw DomainError("BarrierSpec: missing constant " + name);
        return it->second;
    }
};

/// Exponential-shell supersolution for q = p-1. Encloses the domain in a
/// ball about a point one diameter outside; the amplitude is the smallest
/// value making the shell a supersolution that also dominates u0_sup.
/// Records the decay constant C1.
BarrierSpec make_global_exp(const Params& params, const Grid& domain, double u0_sup);

/// Power-shell supersolution for q > p-1, with amplitude, outer radius and
/// decay rate fixed by the closed-form recipe. Records C1.
BarrierSpec make_global_power(const Params& params, const Grid& domain, double u0_sup);

/// Boundary strip barrier at the given boundary point, valid on
/// [0, t0] x strip. q in [p-1, p) uses the direct unknown; q = p the
/// exp-transformed one. Records the boundary Lipschitz constant L1.
/// profile_C1 is the decay constant of the matching global barrier.
BarrierSpec make_boundary_barrier(const Params& params, const Grid& domain,
                                  double boundary_point, double t0, double profile_C1,
                                  double u0_sup);

/// Separate-variables supersolution A f^gamma / (gamma (1+delta t)^(1/(p-2)))
/// dominating initial data below B f^beta, for q in (p-1, p].
BarrierSpec make_power_of_profile(const Params& params, const Profile& profile, double beta,
                                  double B);

/// f(x) / (||grad f||^(p-2) + t)^(1/(p-2)), a supersolution for q > p-1.
BarrierSpec make_giant_multiple(const Params& params, const Profile& profile);

/// Closed-form barrier value at time t and grid coordinate x.
/// Throws OutOfWindow outside the validity window.
double eval_barrier(const BarrierSpec& spec, double t, double x);

/// Analytic time derivative of the barrier at (t, x).
double eval_barrier_dt(const BarrierSpec& spec, double t, double x);

/// True when interior node i of the grid lies in the barrier's certified
/// region (the strip for boundary kinds; everywhere otherwise).
bool barrier_covers_node(const BarrierSpec& spec, const Grid& grid, int i);

/// Re-checks the constructor's constraint set on the stored constants;
/// returns the violated constraints (empty when untampered).
std::vector<std::string> validate_constants(const BarrierSpec& spec);

struct ResidualViolation {
    double time;
    int node;
    double residual;
};

struct CertificationReport {
    BarrierKind kind;
    std::map<std::string, double> constants;
    double min_residual = 0.0;
    double tolerance = 0.0; ///< pass threshold C_cal * h
    double c_cal = 0.0;
    double h = 0.0;
    std::vector<ResidualViolation> violations;
    bool pass = false;
};

/// Evaluates the discrete residual of the barrier at every (time, node) of
/// its certified region and flags entries below -c_cal * h.
/// BoundaryExpTransformed certifies the transformed equation
/// d/dt[((1+S)/(p-1))^(p-1)] = discrete p-Laplacian of S.
CertificationReport certify_supersolution(const BarrierSpec& spec, const Grid& grid,
                                          std::span<const double> times, const Params& params,
                                          const SchemeConfig& scheme, double c_cal);

/// Fits the h-coefficient of the certification residual's negative part
/// across a refinement ladder (Richardson-style slope), with a small floor
/// so exactly-nonnegative residuals calibrate to a stable tiny constant.
/// Returns the per-pair estimates (for stability checks) and the final
/// C_cal = 1.25 * max of them.
struct CalibrationResult {
    std::vector<double> per_level; ///< one estimate per refinement level
    double c_cal = 0.0;
};
CalibrationResult calibrate_certification(const BarrierSpec& spec,
                                          std::span<const Grid> refinements,
                                          std::span<const double> times, const Params& params,
                                          const SchemeConfig& scheme);

/// Same, for barriers that must be rebuilt per grid (profile-based kinds):
/// the factory produces the spec for each refinement level.
CalibrationResult calibrate_certification(
    const std::function<BarrierSpec(const Grid&)>& factory, std::span<const Grid> refinements,
    std::span<const double> times, const Params& params, const SchemeConfig& scheme);

struct DominationReport {
    double max_violation = 0.0; ///< max over snapshots/nodes of (u - S)+
    double tolerance = 0.0;
    long checked = 0;
    std::vector<ResidualViolation> violations; ///< entries beyond tolerance
    bool pass = false;
};

/// Nodewise check u(t) <= S(t) over every snapshot in the barrier's
/// region/window. For the q = p transformed kind the comparison applies to
/// h = e^(u/(p-1)) - 1. Throws PreconditionFailed when the initial snapshot
/// is not dominated.
DominationReport check_domination(const Trajectory& traj, const BarrierSpec& spec,
                                  double tolerance = 0.0);

} // namespace fg
