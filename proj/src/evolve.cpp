#include "fg/evolve.hpp"

#include <algorithm>
#include <cmath>

namespace fg {

namespace {

struct ModeTraits {
    double q_eff;
    bool has_source;
    bool has_reaction;
    bool decaying_prefactor;
};

ModeTraits traits_for(SourceMode mode, const Params& p) {
    switch (mode) {
    case SourceMode::Physical:
        return {p.q, true, false, false};
    case SourceMode::RescaledDecaying:
        return {p.q, true, true, true};
    case SourceMode::RescaledFrozenGiant:
        return {p.p - 1.0, true, true, false};
    case SourceMode::RescaledPure:
    default:
        return {p.q, false, true, false};
    }
}

double source_prefactor(const ModeTraits& mt, const Params& p, double s) {
    if (!mt.has_source) return 0.0;
    if (!mt.decaying_prefactor) return 1.0;
    return std::exp(-(p.q - p.p + 1.0) * s / (p.p - 2.0));
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Workspace-driven Euler kernel shared by all public entry points.
struct Stepper {
    const Grid& g;
    Params params;
    SchemeConfig scheme;
    ModeTraits mt;
    int n;
    double h;
    std::vector<double> slopes;  // n+1 face quotients
    std::vector<double> fweight; // face geometric weights
    std::vector<double> ndiv;    // h * r_i^(N-1)

    Stepper(const Grid& grid, const Params& p, const SchemeConfig& sc, SourceMode mode)
        : g(grid), params(p), scheme(sc), mt(traits_for(mode, p)), n(grid.n()), h(grid.h()),
          slopes(n + 1), fweight(n + 1), ndiv(n) {
        for (int j = 0; j <= n; ++j) fweight[j] = face_weight(g, j);
        for (int i = 0; i < n; ++i) ndiv[i] = h * node_weight_geom(g, i);
    }

    void compute_slopes(const std::vector<double>& v) {
        slopes[0] = g.kind() == GridKind::Interval ? v[0] / h : 0.0;
        for (int j = 1; j < n; ++j) slopes[j] = (v[j] - v[j - 1]) / h;
        slopes[n] = -v[n - 1] / h;
    }

    double max_slope() const { return max_abs(slopes); }

    /// CFL proposal from the current slopes; infinite when the field is flat.
    double dt_bound(double cfl_safety) const {
        const double m = max_slope();
        if (m == 0.0) return std::numeric_limits<double>::infinity();
        const double dt_par = h * h / (2.0 * (params.p - 1.0) * abs_pow(m, params.p - 2.0));
        double dt = dt_par;
        if (mt.has_source) {
            const double dt_ham = h / (mt.q_eff * abs_pow(m, mt.q_eff - 1.0));
            dt = std::min(dt, dt_ham);
        }
        return cfl_safety * dt;
    }

    /// out = v + dt * rhs(v); requires compute_slopes(v) to be current.
    void apply(const std::vector<double>& v, double dt, double s_now,
               std::vector<double>& out) {
        const double pref = source_prefactor(mt, params, s_now);
        const double reac = mt.has_reaction ? 1.0 / (params.p - 2.0) : 0.0;
        const bool godunov = scheme.hamiltonian == Hamiltonian::Godunov;
        const double pm1 = params.p - 1.0;
        const double q = mt.q_eff;

        double wflux_lo = fweight[0] * signed_pow(slopes[0], pm1);
        for (int i = 0; i < n; ++i) {
            const double wflux_hi = fweight[i + 1] * signed_pow(slopes[i + 1], pm1);
            double rhs = (wflux_hi - wflux_lo) / ndiv[i];
            wflux_lo = wflux_hi;
            if (pref != 0.0) {
                const double dm = slopes[i], dp = slopes[i + 1];
                double ham;
                if (godunov) {
                    ham = abs_pow(godunov_slope(dm, dp), q);
                } else {
                    const double alpha = q * abs_pow(std::max(std::abs(dm), std::abs(dp)), q - 1.0);
                    ham = abs_pow(0.5 * (dm + dp), q) - 0.5 * alpha * (dp - dm);
                }
                rhs += pref * ham;
            }
            if (reac != 0.0) rhs += reac * v[i];
            out[i] = v[i] + dt * rhs;
        }
    }
};

void validate_initial(const Field& u0, const EvolveConfig& cfg) {
    if (!all_finite(u0)) throw DomainError("evolve: initial data is not finite");
    if (!nonnegative(u0)) throw DomainError("evolve: initial data must be nonnegative");
    if (!cfg.allow_zero_init && sup_norm(u0) == 0.0)
        throw DomainError("evolve: initial data is identically zero (set allow_zero_init to override)");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw DomainError("evolve: cfl_safety must lie in (0, 1]");
    if (!(cfg.dt_min > 0.0)) throw DomainError("evolve: dt_min must be positive");
    if (!(cfg.grad_cap > 0.0)) throw DomainError("evolve: grad_cap must be positive");
}

Trajectory run(const Field& u0, const Params& params, const EvolveConfig& cfg,
               const SchemeConfig& scheme, SourceMode mode) {
    validate_initial(u0, cfg);
    if (u0.grid->kind() == GridKind::RadialBall && u0.grid->dim() != params.dim)
        throw DimensionMismatch("evolve: params.dim does not match the grid dimension");

    Stepper st(*u0.grid, params, scheme, mode);
    const bool rescaled = mode != SourceMode::Physical;
    const double inv_decay = 1.0 / (params.p - 2.0);

    Trajectory traj;
    std::vector<double> cur = u0.values, nxt(u0.n());
    double t = u0.time;
    traj.snapshots.emplace_back(u0.grid, cur, t);

    long k_record = 1;
    const double t0 = t;
    auto next_record = [&] { return t0 + cfg.record_every * k_record; };

    while (t < cfg.t_end) {
        st.compute_slopes(cur);
        const double target = std::min(next_record(), cfg.t_end);
        const double cap = target - t;
        double dt = st.dt_bound(cfg.cfl_safety);
        const bool landed = !(dt < cap); // covers dt = inf on flat fields
        if (landed) dt = cap;
        if (!landed && dt < cfg.dt_min) {
            const double m = st.max_slope();
            if (m > cfg.grad_cap) {
                int arg = 0;
                double best = 0.0;
                for (int j = 0; j <= st.n; ++j)
                    if (std::abs(st.slopes[j]) > best) { best = std::abs(st.slopes[j]); arg = j; }
                traj.events.push_back({EventKind::BlowupGuard, t, std::min(arg, st.n - 1), m});
                return traj;
            }
            throw StepTooSmall("evolve: admissible step below dt_min without blowup signature", t, dt);
        }

        st.apply(cur, dt, t, nxt);
        cur.swap(nxt);
        t = landed ? target : t + dt;

        if (landed) {
            traj.snapshots.emplace_back(u0.grid, cur, t);
            if (target != cfg.t_end) ++k_record;

            const Field& now = traj.snapshots.back();
            const size_t m = traj.snapshots.size();

            if (rescaled && m >= 2) {
                const Field& prev = traj.snapshots[m - 2];
                const double ds = now.time - prev.time;
                double drift = 0.0;
                for (int i = 0; i < now.n(); ++i)
                    drift = std::max(drift, std::abs(now.values[i] - prev.values[i]));
                if (ds > 0.0 && drift / ds < cfg.steady_tol) {
                    traj.events.push_back({EventKind::SteadyState, t, -1, drift / ds});
                    return traj;
                }
            }
            if (!rescaled && std::isfinite(cfg.boundary_L1) && t >= 1.0) {
                const double bq = boundary_quotient(now);
                const double bound =
                    2.0 * cfg.boundary_L1 * std::pow(1.0 + t, -inv_decay);
                if (bq > bound) {
                    traj.events.push_back({EventKind::BoundaryLoss, t, -1, bq});
                    return traj;
                }
            }
        }
    }
    return traj;
}

} // namespace

double propose_dt(const Field& u, const Params& params, const EvolveConfig& cfg,
                  SourceMode mode) {
    Stepper st(*u.grid, params, SchemeConfig{}, mode);
    st.compute_slopes(u.values);
    return st.dt_bound(cfg.cfl_safety);
}

Field step_with_dt(const Field& u, double dt, const Params& params, const SchemeConfig& scheme,
                   SourceMode mode) {
    Stepper st(*u.grid, params, scheme, mode);
    st.compute_slopes(u.values);
    Field out(u.grid, u.time + dt);
    st.apply(u.values, dt, u.time, out.values);
    return out;
}

std::pair<Field, double> step(const Field& u, const Params& params, const EvolveConfig& cfg,
                              const SchemeConfig& scheme, double dt_cap) {
    SourceMode mode = cfg.rescaled ? SourceMode::RescaledDecaying : SourceMode::Physical;
    Stepper st(*u.grid, params, scheme, mode);
    st.compute_slopes(u.values);
    double dt = std::min(st.dt_bound(cfg.cfl_safety), dt_cap);
    if (!std::isfinite(dt))
        throw DomainError("step: no finite time-step bound; pass a dt_cap");
    if (dt < cfg.dt_min)
        throw StepTooSmall("step: admissible step below dt_min", u.time, dt);
    Field out(u.grid, u.time + dt);
    st.apply(u.values, dt, u.time, out.values);
    return {std::move(out), dt};
}

Trajectory evolve(const Field& u0, const Params& params, const EvolveConfig& cfg,
                  const SchemeConfig& scheme) {
    return run(u0, params, cfg, scheme, SourceMode::Physical);
}

Trajectory evolve_rescaled(const Field& v0, const Params& params, const EvolveConfig& cfg,
                           const SchemeConfig& scheme, SourceMode mode) {
    if (mode == SourceMode::Physical)
        throw DomainError("evolve_rescaled: pass a rescaled source mode");
    return run(v0, params, cfg, scheme, mode);
}

std::pair<Trajectory, Trajectory> evolve_pair(const Field& u0, const Field& w0,
                                              const Params& params, const EvolveConfig& cfg,
                                              const SchemeConfig& scheme) {
    require_same_grid(u0, w0, "evolve_pair");
    validate_initial(u0, cfg);
    validate_initial(w0, cfg);

    Stepper su(*u0.grid, params, scheme, SourceMode::Physical);
    Stepper sw(*u0.grid, params, scheme, SourceMode::Physical);

    Trajectory tu, tw;
    std::vector<double> cu = u0.values, cw = w0.values, nu(u0.n()), nw(u0.n());
    double t = 0.0;
    tu.snapshots.emplace_back(u0.grid, cu, t);
    tw.snapshots.emplace_back(u0.grid, cw, t);
    long k_record = 1;

    while (t < cfg.t_end) {
        su.compute_slopes(cu);
        sw.compute_slopes(cw);
        const double target = std::min(cfg.record_every * k_record, cfg.t_end);
        const double cap = target - t;
        double dt = std::min(su.dt_bound(cfg.cfl_safety), sw.dt_bound(cfg.cfl_safety));
        const bool landed = !(dt < cap);
        if (landed) dt = cap;
        if (!landed && dt < cfg.dt_min)
            throw StepTooSmall("evolve_pair: admissible step below dt_min", t, dt);
        su.apply(cu, dt, t, nu);
        sw.apply(cw, dt, t, nw);
        cu.swap(nu);
        cw.swap(nw);
        t = landed ? target : t + dt;
        if (landed) {
            tu.snapshots.emplace_back(u0.grid, cu, t);
            tw.snapshots.emplace_back(u0.grid, cw, t);
            if (target != cfg.t_end) ++k_record;
        }
    }
    return {std::move(tu), std::move(tw)};
}

Field rescale_to_v(const Field& u, double p) {
    if (!(u.time > 0.0))
        throw DomainError("rescale_to_v: requires time > 0");
    Field v(u.grid, std::log(u.time));
    const double scale = std::pow(u.time, 1.0 / (p - 2.0));
    for (int i = 0; i < u.n(); ++i) v.values[i] = scale * u.values[i];
    return v;
}

Field rescale_from_v(const Field& v, double p) {
    const double t = std::exp(v.time);
    Field u(v.grid, t);
    const double scale = std::pow(t, -1.0 / (p - 2.0));
    for (int i = 0; i < v.n(); ++i) u.values[i] = scale * v.values[i];
    return u;
}

} // namespace fg
