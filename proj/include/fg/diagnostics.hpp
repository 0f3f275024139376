#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fg/barriers.hpp"

namespace fg {

/// Least-squares power-law fit of the sup-norm decay.
struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0; ///< of ln sup_norm against ln t
    double r_squared = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
};

/// Fits ln sup_norm(t) = intercept + exponent * ln t over snapshots with
/// t in [t_lo, t_hi]. Needs at least 5 snapshots with positive sup-norm in
/// the window.
DecayFit fit_decay(const Trajectory& traj, double t_lo, double t_hi);

/// Per snapshot, || t^(1/(p-2)) u(t) - profile ||_inf. The t = 0 snapshot
/// contributes ||profile||_inf.
std::vector<std::pair<double, double>> profile_distance(const Trajectory& traj,
                                                        const Profile& profile, double p);

struct BlowupReport {
    double r = 0.0; ///< q/(q-p)
    std::vector<std::pair<double, double>> energy_series; ///< (t, ||u||_{r+1}^{r+1})
    std::vector<bool> lower_bound_check; ///< per snapshot interval
    double kappa1 = 0.0, kappa2 = 0.0;   ///< constants of the growth inequality
    double poincare = 0.0;               ///< discrete Poincare constant used
    std::optional<double> blowup_time_estimate;   ///< guard event time
    std::optional<double> ode_extrapolation_time; ///< secondary, from the energy inequality
};

/// Discrete (r+1)-energy series with the superlinear growth check
///   dE/dt >= (r+1) (kappa1 |O|^{-(q-1)/(r+q)} E^{(r+q)/(r+1)} - kappa2),
/// constants assembled from |O|, p, q and the grid's discrete Poincare
/// constant (the q-form constant is approximated by lambda1^(q/2) |O|^(1-q/2),
/// a computable stand-in recorded in the report).
BlowupReport blowup_energy(const Trajectory& traj, const Params& params);

/// Per adjacent snapshot pair, the defect of the weak form
///   d/dt int u psi = int(-|grad u|^(p-2) grad u . grad psi + |grad u|^q psi)
/// with trapezoid quadrature, face-based gradients, and the time integral
/// approximated by the endpoint average.
std::vector<std::pair<double, double>> weak_form_residual(const Trajectory& traj,
                                                          const Params& params,
                                                          const Field& test_fn);

/// Smallest Rayleigh quotient of the (radially weighted) second-difference
/// matrix with Dirichlet boundary: inverse power iteration with a
/// tridiagonal solve.
double discrete_poincare_lambda1(const Grid& grid);

/// Trapezoid integral of |u|^s over the domain (radial measure included).
double integral_abs_pow(const Field& u, double s);

} // namespace fg
