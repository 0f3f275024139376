#include "fg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace fg {

DecayFit fit_decay(const Trajectory& traj, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (const Field& u : traj.snapshots) {
        if (u.time < t_lo || u.time > t_hi || u.time <= 0.0) continue;
        const double s = sup_norm(u);
        if (!(s > 0.0))
            throw InsufficientData("fit_decay: nonpositive sup-norm inside the window");
        xs.push_back(std::log(u.time));
        ys.push_back(std::log(s));
    }
    if (xs.size() < 5)
        throw InsufficientData("fit_decay: need at least 5 snapshots in the window");

    const size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t k = 0; k < m; ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
        syy += ys[k] * ys[k];
    }
    const double det = m * sxx - sx * sx;
    DecayFit fit;
    fit.exponent = (m * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.exponent * sx) / m;
    const double sst = syy - sy * sy / m;
    double sse = 0.0;
    for (size_t k = 0; k < m; ++k) {
        const double e = ys[k] - (fit.intercept + fit.exponent * xs[k]);
        sse += e * e;
    }
    fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    return fit;
}

std::vector<std::pair<double, double>> profile_distance(const Trajectory& traj,
                                                        const Profile& profile, double p) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.snapshots.size());
    for (const Field& u : traj.snapshots) {
        require_same_grid(u, profile.field, "profile_distance");
        const double scale = u.time > 0.0 ? std::pow(u.time, 1.0 / (p - 2.0)) : 0.0;
        double d = 0.0;
        for (int i = 0; i < u.n(); ++i)
            d = std::max(d, std::abs(scale * u.values[i] - profile.field.values[i]));
        out.emplace_back(u.time, d);
    }
    return out;
}

double integral_abs_pow(const Field& u, double s) {
    double acc = 0.0;
    for (int i = 0; i < u.n(); ++i)
        acc += u.grid->node_weight(i) * abs_pow(u.values[i], s);
    return acc;
}

double discrete_poincare_lambda1(const Grid& grid) {
    // Generalized eigenproblem K g = lambda W g with K the face-weighted
    // stiffness matrix and W the node measures; inverse power iteration,
    // Thomas solves on the tridiagonal K.
    const int n = grid.n();
    const double h = grid.h();
    std::vector<double> wface(n + 1), wnode(n);
    for (int j = 0; j <= n; ++j) wface[j] = face_weight(grid, j) / (h);
    for (int i = 0; i < n; ++i)
        wnode[i] = grid.kind() == GridKind::Interval
                       ? h
                       : std::pow(grid.coord(i), grid.dim() - 1) * h;
    if (grid.kind() == GridKind::Interval)
        for (int j = 0; j <= n; ++j) wface[j] = 1.0 / h;

    std::vector<double> diag(n), lower(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = wface[i] + wface[i + 1];
    for (int i = 0; i + 1 < n; ++i) lower[i] = -wface[i + 1];

    std::vector<double> g(n, 1.0), rhs(n), cp(n), dp(n);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < n; ++i) rhs[i] = wnode[i] * g[i];
        // Thomas algorithm
        cp[0] = lower.empty() ? 0.0 : lower[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (int i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i - 1] * cp[i - 1];
            cp[i] = i + 1 < n ? lower[i] / m : 0.0;
            dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / m;
        }
        g[n - 1] = dp[n - 1];
        for (int i = n - 2; i >= 0; --i) g[i] = dp[i] - cp[i] * g[i + 1];
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm = std::max(nrm, std::abs(g[i]));
        for (int i = 0; i < n; ++i) g[i] /= nrm;

        double num = 0.0, den = 0.0;
        num += wface[0] * g[0] * g[0];
        for (int j = 1; j < n; ++j) num += wface[j] * (g[j] - g[j - 1]) * (g[j] - g[j - 1]);
        num += wface[n] * g[n - 1] * g[n - 1];
        for (int i = 0; i < n; ++i) den += wnode[i] * g[i] * g[i];
        const double next = num / den;
        if (it > 3 && std::abs(next - lambda) < 1e-13 * next) return next;
        lambda = next;
    }
    return lambda;
}

BlowupReport blowup_energy(const Trajectory& traj, const Params& params) {
    const double p = params.p, q = params.q;
    if (!(q > p)) throw RegimeError("blowup_energy: requires q > p");
    if (traj.snapshots.empty()) throw DomainError("blowup_energy: empty trajectory");

    BlowupReport rep;
    rep.r = q / (q - p);
    const double r = rep.r;
    const Grid& grid = *traj.snapshots.front().grid;
    const double omega = grid.measure();

    const double lambda1 = discrete_poincare_lambda1(grid);
    rep.poincare = lambda1;
    // q-form Poincare stand-in: |grad g|_q^q >= lambda1^(q/2) |O|^(1-q/2) |g|_2^q,
    // chained into the displayed growth inequality.
    const double cpq = std::pow(lambda1, q / 2.0) * std::pow(omega, 1.0 - q / 2.0);
    rep.kappa1 = (q - p) / q * std::pow((q - p) / (q - p + 1.0), q) * cpq;
    rep.kappa2 = std::pow(q / (q - p), p / (q - p)) * omega;

    for (const Field& u : traj.snapshots)
        rep.energy_series.emplace_back(u.time, integral_abs_pow(u, r + 1.0));

    const double c1 = rep.kappa1 * std::pow(omega, -(q - 1.0) / (r + q));
    for (size_t k = 0; k + 1 < rep.energy_series.size(); ++k) {
        const auto [t0, e0] = rep.energy_series[k];
        const auto [t1, e1] = rep.energy_series[k + 1];
        const double lhs = (e1 - e0) / (t1 - t0);
        const double rhs = (r + 1.0) * (c1 * std::pow(e0, (r + q) / (r + 1.0)) - rep.kappa2);
        rep.lower_bound_check.push_back(lhs >= rhs);
    }

    for (const Event& e : traj.events)
        if (e.kind == EventKind::BlowupGuard) rep.blowup_time_estimate = e.time;

    // Secondary estimate: remaining time of the scalar inequality
    // E' = (r+1)(c1 E^a - kappa2) from the last sample, integrated until the
    // contribution is negligible.
    if (!rep.energy_series.empty()) {
        const double a = (r + q) / (r + 1.0);
        double e = rep.energy_series.back().second;
        if ((r + 1.0) * (c1 * std::pow(e, a) - rep.kappa2) > 0.0) {
            double time = rep.energy_series.back().first;
            double dtaccum = 0.0;
            for (int k = 0; k < 100000; ++k) {
                const double rate = (r + 1.0) * (c1 * std::pow(e, a) - rep.kappa2);
                const double de = std::max(e * 0.01, 1e-6);
                const double dt = de / rate;
                dtaccum += dt;
                e += de;
                if (dt < 1e-12 * std::max(dtaccum, 1e-30) && k > 100) break;
            }
            rep.ode_extrapolation_time = time + dtaccum;
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> weak_form_residual(const Trajectory& traj,
                                                          const Params& params,
                                                          const Field& test_fn) {
    if (traj.snapshots.size() < 2)
        throw InsufficientData("weak_form_residual: need at least two snapshots");
    require_same_grid(traj.snapshots.front(), test_fn, "weak_form_residual");

    const Grid& grid = *test_fn.grid;
    const int n = grid.n();
    const double h = grid.h();
    const auto dpsi = face_slopes(test_fn);

    // Independent quadrature (not the scheme's own stencils): face-based
    // gradients for the flux integral, node values with face-averaged
    // gradient magnitude for the source.
    auto rhs_quadrature = [&](const Field& u) {
        const auto du = face_slopes(u);
        double flux = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = grid.kind() == GridKind::Interval
                                 ? h
                                 : Grid::sphere_area(grid.dim()) * face_weight(grid, j) * h;
            flux += w * signed_pow(du[j], params.p - 1.0) * dpsi[j];
        }
        double source = 0.0;
        for (int i = 0; i < n; ++i) {
            const double gmag = 0.5 * (std::abs(du[i]) + std::abs(du[i + 1]));
            source += grid.node_weight(i) * abs_pow(gmag, params.q) * test_fn.values[i];
        }
        return -flux + source;
    };
    auto mass = [&](const Field& u) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += grid.node_weight(i) * u.values[i] * test_fn.values[i];
        return acc;
    };

    std::vector<std::pair<double, double>> out;
    for (size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
        const Field& u0 = traj.snapshots[k];
        const Field& u1 = traj.snapshots[k + 1];
        const double dt = u1.time - u0.time;
        const double lhs = (mass(u1) - mass(u0)) / dt;
        const double rhs = 0.5 * (rhs_quadrature(u0) + rhs_quadrature(u1));
        out.emplace_back(0.5 * (u0.time + u1.time), std::abs(lhs - rhs));
    }
    return out;
}

} // namespace fg
