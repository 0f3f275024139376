#include "fg/operators.hpp"

namespace fg {

Field discrete_p_laplacian(const Field& u, double p) {
    return discrete_p_laplacian(u, p, 0.0, 0.0);
}

Field discrete_p_laplacian(const Field& u, double p, double bv_inner, double bv_outer) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    const auto d = face_slopes(u, bv_inner, bv_outer);

    Field out(u.grid, u.time);
    if (g.kind() == GridKind::Interval || g.dim() == 1) {
        double flux_lo = signed_pow(d[0], p - 1.0);
        if (g.kind() == GridKind::RadialBall) flux_lo = 0.0; // symmetry at r = 0
        for (int i = 0; i < n; ++i) {
            const double flux_hi = signed_pow(d[i + 1], p - 1.0);
            out.values[i] = (flux_hi - flux_lo) / h;
            flux_lo = flux_hi;
        }
    } else {
        double wflux_lo = 0.0; // origin face carries no flux
        for (int i = 0; i < n; ++i) {
            const double wflux_hi = face_weight(g, i + 1) * signed_pow(d[i + 1], p - 1.0);
            out.values[i] = (wflux_hi - wflux_lo) / (h * node_weight_geom(g, i));
            wflux_lo = wflux_hi;
        }
    }
    return out;
}

Field hamiltonian_source(const Field& u, double q, const SchemeConfig& cfg) {
    return hamiltonian_source(u, q, cfg, 0.0, 0.0);
}

Field hamiltonian_source(const Field& u, double q, const SchemeConfig& cfg, double bv_inner,
                         double bv_outer) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const auto d = face_slopes(u, bv_inner, bv_outer);

    Field out(u.grid, u.time);
    if (cfg.hamiltonian == Hamiltonian::Godunov) {
        for (int i = 0; i < n; ++i)
            out.values[i] = abs_pow(godunov_slope(d[i], d[i + 1]), q);
    } else {
        for (int i = 0; i < n; ++i) {
            const double dm = d[i], dp = d[i + 1];
            const double alpha = q * abs_pow(std::max(std::abs(dm), std::abs(dp)), q - 1.0);
            out.values[i] = abs_pow(0.5 * (dm + dp), q) - 0.5 * alpha * (dp - dm);
        }
    }
    return out;
}

Field discrete_residual(const Field& u, const Field& du_dt, const Params& params,
                        const SchemeConfig& cfg) {
    require_same_grid(u, du_dt, "discrete_residual");
    Field lap = discrete_p_laplacian(u, params.p);
    Field src = hamiltonian_source(u, params.q, cfg);
    Field out(u.grid, u.time);
    for (int i = 0; i < u.n(); ++i)
        out.values[i] = du_dt.values[i] - lap.values[i] - src.values[i];
    return out;
}

} // namespace fg
