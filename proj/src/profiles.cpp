#include "fg/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace fg {

namespace {

/// Radial profile ODE in the flux variable, integrated from the centre:
///   f' = sgn(w) |w|^(1/(p-1))
///   w' = -k |w| - f/(p-2) - (N-1) w / r
/// with k = 1 for the source-balanced profile and k = 0 for the pure one.
/// At r = 0 symmetry gives w = 0 and the limit w'(0) = -f(0)/(N (p-2)).
struct ProfileOde {
    double p;
    int dim;
    bool with_source;

    void rhs(double r, double f, double w, double& df, double& dw) const {
        df = signed_pow(w, 1.0 / (p - 1.0));
        dw = -(with_source ? std::abs(w) : 0.0) - f / (p - 2.0);
        if (dim > 1) {
            if (r > 0.0)
                dw -= (dim - 1) * w / r;
            else
                dw /= dim; // w ~ w'(0) r makes (N-1) w/r -> (N-1) w'(0)
        }
    }

    void rk4(double r, double step, double& f, double& w) const {
        double k1f, k1w, k2f, k2w, k3f, k3w, k4f, k4w;
        rhs(r, f, w, k1f, k1w);
        rhs(r + 0.5 * step, f + 0.5 * step * k1f, w + 0.5 * step * k1w, k2f, k2w);
        rhs(r + 0.5 * step, f + 0.5 * step * k2f, w + 0.5 * step * k2w, k3f, k3w);
        rhs(r + step, f + step * k3f, w + step * k3w, k4f, k4w);
        f += step / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        w += step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    }

    /// Integrates f(0) = a, w(0) = 0 over n_steps of the given size and
    /// returns the trajectory of f (and optionally w) at every step.
    void integrate(double a, double step, int n_steps, std::vector<double>& f_out,
                   std::vector<double>& w_out) const {
        f_out.resize(n_steps + 1);
        w_out.resize(n_steps + 1);
        double f = a, w = 0.0;
        f_out[0] = f;
        w_out[0] = w;
        for (int k = 0; k < n_steps; ++k) {
            rk4(k * step, step, f, w);
            f_out[k + 1] = f;
            w_out[k + 1] = w;
        }
    }
};

struct ShotSolution {
    double centre_value;
    double step;
    std::vector<double> f; ///< values at multiples of step from the centre
    std::vector<double> w;
};

ShotSolution shoot(const ProfileOde& ode, double half_length, const ShootingConfig& cfg,
                   double grid_h) {
    const double step = cfg.ode_step > 0.0 ? cfg.ode_step : grid_h / 10.0;
    const int n_steps = static_cast<int>(std::lround(half_length / step));
    if (std::abs(n_steps * step - half_length) > 1e-9 * half_length)
        throw DomainError("shoot: ode_step must divide the integration length");

    std::vector<double> f, w;
    auto boundary_value = [&](double a) {
        ode.integrate(a, step, n_steps, f, w);
        return f.back();
    };

    double lo = cfg.bracket_lo;
    double hi = cfg.bracket_hi > 0.0 ? cfg.bracket_hi : 20.0 * half_length;
    double flo = boundary_value(lo);
    double fhi = boundary_value(hi);
    // Small centre values undershoot (the forcing wins), large ones
    // overshoot; expand outward if the initial bracket missed the crossing.
    for (int k = 0; k < 60 && flo > 0.0; ++k) {
        lo *= 0.5;
        flo = boundary_value(lo);
    }
    for (int k = 0; k < 60 && fhi < 0.0; ++k) {
        hi *= 2.0;
        fhi = boundary_value(hi);
    }
    if (!(flo <= 0.0 && fhi >= 0.0))
        throw BracketError("shoot: bracket does not straddle the boundary crossing");

    double a = 0.5 * (lo + hi), fa = 0.0;
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        a = 0.5 * (lo + hi);
        fa = boundary_value(a);
        if (std::abs(fa) <= cfg.bisection_tol || hi - lo <= cfg.bisection_tol * std::max(1.0, a))
            break;
        (fa > 0.0 ? hi : lo) = a;
    }
    if (it == cfg.max_iter)
        throw NonConvergence("shoot: bisection did not reach the boundary tolerance");

    ShotSolution s;
    s.centre_value = a;
    s.step = step;
    ode.integrate(a, step, n_steps, s.f, s.w);
    return s;
}

Profile wrap_shot(const ShotSolution& s, const Grid& grid, ProfileKind kind, double p) {
    Field field(std::make_shared<Grid>(grid), 0.0);
    const double step = s.step;
    const double centre =
        grid.kind() == GridKind::Interval ? 0.5 * (grid.left() + grid.right()) : 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double dist = std::abs(grid.coord(i) - centre);
        const int idx = static_cast<int>(std::lround(dist / step));
        field.values[i] = std::max(s.f[idx], 0.0);
    }

    Profile prof;
    prof.kind = kind;
    prof.sup_norm = s.centre_value; // f decreases away from the centre
    double wmax = 0.0;
    for (double w : s.w) wmax = std::max(wmax, std::abs(w));
    prof.grad_sup_norm = std::pow(wmax, 1.0 / (p - 1.0));
    prof.lipschitz_const = lipschitz_with_boundary(field);
    prof.field = std::move(field);
    return prof;
}

} // namespace

Profile shoot_profile_f(const Params& params, const Grid& grid, const ShootingConfig& cfg) {
    if (grid.kind() == GridKind::RadialBall && grid.dim() != params.dim)
        throw DimensionMismatch("shoot_profile_f: params.dim does not match the grid");
    ProfileOde ode{params.p, grid.kind() == GridKind::Interval ? 1 : grid.dim(), true};
    const double half =
        grid.kind() == GridKind::Interval ? 0.5 * grid.extent() : grid.radius();
    return wrap_shot(shoot(ode, half, cfg, grid.h()), grid, ProfileKind::F_withSource, params.p);
}

Profile shoot_profile_f0(const Params& params, const Grid& grid, const ShootingConfig& cfg) {
    if (grid.kind() == GridKind::RadialBall && grid.dim() != params.dim)
        throw DimensionMismatch("shoot_profile_f0: params.dim does not match the grid");
    ProfileOde ode{params.p, grid.kind() == GridKind::Interval ? 1 : grid.dim(), false};
    const double half =
        grid.kind() == GridKind::Interval ? 0.5 * grid.extent() : grid.radius();
    return wrap_shot(shoot(ode, half, cfg, grid.h()), grid, ProfileKind::F0_pure, params.p);
}

Profile march_profile(const Params& params, const Grid& grid, ProfileKind kind,
                      const EvolveConfig& cfg, const SchemeConfig& scheme,
                      const Field* initial_guess) {
    auto gp = std::make_shared<Grid>(grid);
    Field v0(gp, 0.0);
    if (initial_guess) {
        require_same_grid(*initial_guess, v0, "march_profile");
        v0.values = initial_guess->values;
    } else {
        // Smooth positive bump vanishing at the boundary.
        const double c = grid.kind() == GridKind::Interval
                             ? 0.5 * (grid.left() + grid.right())
                             : 0.0;
        const double half =
            grid.kind() == GridKind::Interval ? 0.5 * grid.extent() : grid.radius();
        for (int i = 0; i < grid.n(); ++i) {
            const double x = (grid.coord(i) - c) / half;
            const double cs = std::cos(0.5 * M_PI * x);
            v0.values[i] = cs * cs;
        }
    }

    const SourceMode mode = kind == ProfileKind::F_withSource
                                ? SourceMode::RescaledFrozenGiant
                                : SourceMode::RescaledPure;
    Trajectory traj = evolve_rescaled(v0, params, cfg, scheme, mode);
    if (!traj.has_event(EventKind::SteadyState))
        throw NonConvergence("march_profile: no steady state before s_end");

    Profile prof;
    prof.kind = kind;
    prof.field = traj.back();
    prof.field.time = 0.0;
    prof.sup_norm = sup_norm(prof.field);
    prof.lipschitz_const = lipschitz_with_boundary(prof.field);
    prof.grad_sup_norm = prof.lipschitz_const; // grid resolution is all we have
    return prof;
}

Field giant_residual(const Profile& profile, const Params& params, double t,
                     const SchemeConfig& scheme) {
    if (!(t > 0.0)) throw DomainError("giant_residual: requires t > 0");
    const double e = 1.0 / (params.p - 2.0);
    const double c = std::pow(t, -e);
    Field u(profile.field.grid, t);
    Field du_dt(profile.field.grid, t);
    for (int i = 0; i < u.n(); ++i) {
        u.values[i] = c * profile.field.values[i];
        du_dt.values[i] = -e * std::pow(t, -e - 1.0) * profile.field.values[i];
    }
    return discrete_residual(u, du_dt, params, scheme);
}

double profile_max_distance(const Profile& a, const Profile& b) {
    require_same_grid(a.field, b.field, "profile_max_distance");
    double m = 0.0;
    for (int i = 0; i < a.field.n(); ++i)
        m = std::max(m, std::abs(a.field.values[i] - b.field.values[i]));
    return m;
}

} // namespace fg
