#pragma once

#include "fg/evolve.hpp"

namespace fg {

/// Shooting solver settings. bracket = (lo, hi) for the centre value, with
/// automatic expansion; ode_step <= 0 selects h/10.
struct ShootingConfig {
    double bracket_lo = 1e-6;
    double bracket_hi = 0.0; ///< <= 0 selects 10 * domain extent
    double bisection_tol = 1e-12;
    double ode_step = 0.0;
    int max_iter = 200;
};

enum class ProfileKind {
    F_withSource, ///< steady profile of the flow with the |grad|^(p-1) source
    F0_pure       ///< steady profile of the pure diffusion flow
};

/// A computed steady profile with its derived scalars.
/// sup_norm and grad_sup_norm come from the best available resolution (the
/// ODE trajectory for shot profiles, the grid for marched ones);
/// lipschitz_const is the grid difference-quotient maximum including the
/// boundary pairs.
struct Profile {
    Field field;
    ProfileKind kind = ProfileKind::F_withSource;
    double sup_norm = 0.0;
    double grad_sup_norm = 0.0;
    double lipschitz_const = 0.0;
};

/// Solves the radial profile ODE for the source-balanced steady state by
/// bisection on the centre value, integrating outward in the flux variable
/// w = |f'|^(p-2) f' with fixed-step RK4, and samples the result on the
/// grid nodes. The profile depends on p only.
Profile shoot_profile_f(const Params& params, const Grid& grid, const ShootingConfig& cfg);

/// Same as shoot_profile_f without the gradient term: the pure-diffusion
/// steady profile.
Profile shoot_profile_f0(const Params& params, const Grid& grid, const ShootingConfig& cfg);

/// Runs the rescaled flow to its steady state and wraps the limit as a
/// Profile. F_withSource freezes the source prefactor at 1 with exponent
/// p-1 (so the limit solves the same equation as shoot_profile_f for any q);
/// F0_pure drops the source. Throws NonConvergence if no steady state is
/// reached before cfg.t_end (interpreted in s units).
Profile march_profile(const Params& params, const Grid& grid, ProfileKind kind,
                      const EvolveConfig& cfg, const SchemeConfig& scheme,
                      const Field* initial_guess = nullptr);

/// Discrete residual of the physical equation at the separate-variables
/// state t^(-1/(p-2)) * profile, with the analytic time derivative.
Field giant_residual(const Profile& profile, const Params& params, double t,
                     const SchemeConfig& scheme);

/// Max-norm distance between two profiles on the same grid.
double profile_max_distance(const Profile& a, const Profile& b);

} // namespace fg
