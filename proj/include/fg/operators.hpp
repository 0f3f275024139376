#pragma once

#include <span>
#include <vector>

#include "fg/grid.hpp"
#include "fg/params.hpp"

namespace fg {

enum class Hamiltonian { Godunov, LocalLaxFriedrichs };
enum class FluxAverage { FaceCentered };

/// Numerical-scheme selector for the gradient source term.
struct SchemeConfig {
    Hamiltonian hamiltonian = Hamiltonian::Godunov;
    FluxAverage flux_average = FluxAverage::FaceCentered;
    /// Experimental knob for the |xi|^(p-4) factor of the pointwise symbol
    /// at xi = 0 when p < 4. 0 keeps the continuous-extension convention
    /// (the symbol vanishes at critical points). Never used by the
    /// verification runs.
    double degenerate_cutoff = 0.0;
};

/// |s|^e (e >= 0), with fast paths for the common exponents.
inline double abs_pow(double s, double e) {
    s = std::abs(s);
    if (e == 1.0) return s;
    if (e == 2.0) return s * s;
    if (e == 3.0) return s * s * s;
    if (s == 0.0) return e == 0.0 ? 1.0 : 0.0;
    return std::pow(s, e);
}

/// |s|^(e-1) * s, the odd power used by the flux function.
inline double signed_pow(double s, double e) {
    return s < 0.0 ? -abs_pow(s, e) : abs_pow(s, e);
}

/// Dense symmetric matrix, row-major, for the pointwise symbols.
struct SymMatrix {
    int dim = 0;
    std::vector<double> a; // dim*dim entries

    SymMatrix() = default;
    explicit SymMatrix(int d) : dim(d), a(static_cast<size_t>(d) * d, 0.0) {}
    static SymMatrix identity(int d) {
        SymMatrix m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static SymMatrix scalar1d(double x) {
        SymMatrix m(1);
        m.at(0, 0) = x;
        return m;
    }
    double& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }
    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim; ++i) t += at(i, i);
        return t;
    }
};

/// Pointwise degenerate diffusion symbol
///   F0(xi, X) = -|xi|^(p-2) tr(X) - (p-2) |xi|^(p-4) <X xi, xi>.
/// Returns 0 at xi = 0: for p > 2 the trace term vanishes there and the
/// second term extends continuously by 0 (it is O(|xi|^(p-2))).
inline double eval_F0(std::span<const double> xi, const SymMatrix& X, double p,
                      double degenerate_cutoff = 0.0) {
    if (static_cast<int>(xi.size()) != X.dim)
        throw DimensionMismatch("eval_F0: xi and X dimensions differ");
    double n2 = 0.0;
    for (double c : xi) n2 += c * c;
    if (n2 == 0.0) {
        if (degenerate_cutoff > 0.0 && p < 4.0) {
            // <X xi, xi> = 0 at xi = 0, so the regularised factor
            // cutoff^(p-4) still multiplies zero; kept for completeness.
            return 0.0;
        }
        return 0.0;
    }
    const double nrm = std::sqrt(n2);
    double xXx = 0.0;
    for (int i = 0; i < X.dim; ++i)
        for (int j = 0; j < X.dim; ++j) xXx += X.at(i, j) * xi[i] * xi[j];
    return -abs_pow(nrm, p - 2.0) * X.trace() - (p - 2.0) * abs_pow(nrm, p - 4.0) * xXx;
}

/// F(xi, X) = F0(xi, X) - |xi|^q.
inline double eval_F(std::span<const double> xi, const SymMatrix& X, double p, double q,
                     double degenerate_cutoff = 0.0) {
    double n2 = 0.0;
    for (double c : xi) n2 += c * c;
    return eval_F0(xi, X, p, degenerate_cutoff) - abs_pow(std::sqrt(n2), q);
}

/// Difference quotients at the n+1 flux faces of a field, with explicit
/// boundary values (the solution fields carry homogeneous Dirichlet data;
/// barrier certification supplies the barrier's own trace).
/// Face j sits between nodes j-1 and j; face 0 is the left-boundary face
/// (interval) or the origin face (radial, slope 0 by even reflection);
/// face n is the right/outer boundary face.
inline std::vector<double> face_slopes(const Field& u, double bv_inner, double bv_outer) {
    const int n = u.n();
    const double h = u.grid->h();
    std::vector<double> d(n + 1);
    d[0] = u.grid->kind() == GridKind::Interval ? (u.values[0] - bv_inner) / h : 0.0;
    for (int j = 1; j < n; ++j) d[j] = (u.values[j] - u.values[j - 1]) / h;
    d[n] = (bv_outer - u.values[n - 1]) / h;
    return d;
}

inline std::vector<double> face_slopes(const Field& u) { return face_slopes(u, 0.0, 0.0); }

/// Geometric weight r^(N-1) of flux face j (1 for intervals). Radial faces
/// sit at (j + 1/2) h between nodes j-1 and j, except the origin face j = 0
/// at r = 0.
inline double face_weight(const Grid& g, int j) {
    if (g.kind() == GridKind::Interval || g.dim() == 1) return 1.0;
    if (j == 0) return 0.0;
    return std::pow((j + 0.5) * g.h(), g.dim() - 1);
}

/// Geometric divisor r_i^(N-1) of interior node i (1 for intervals).
inline double node_weight_geom(const Grid& g, int i) {
    if (g.kind() == GridKind::Interval || g.dim() == 1) return 1.0;
    return std::pow(g.coord(i), g.dim() - 1);
}

/// Conservative-flux discrete p-Laplacian: difference of face fluxes
/// |D|^(p-2) D, weighted by r^(N-1) on radial grids and divided by
/// h r_i^(N-1). Zero flux through the origin face. The two-argument form
/// closes the stencil with homogeneous Dirichlet data; the boundary-value
/// overloads serve inhomogeneous traces (barrier certification).
Field discrete_p_laplacian(const Field& u, double p);
Field discrete_p_laplacian(const Field& u, double p, double bv_inner, double bv_outer);

/// Monotone numerical Hamiltonian for the gradient source |grad u|^q,
/// evaluated nodewise from the one-sided difference quotients.
Field hamiltonian_source(const Field& u, double q, const SchemeConfig& cfg);
Field hamiltonian_source(const Field& u, double q, const SchemeConfig& cfg, double bv_inner,
                         double bv_outer);

/// du_dt - discrete_p_laplacian(u) - hamiltonian_source(u), nodewise.
/// Nonnegative everywhere certifies a discrete supersolution.
Field discrete_residual(const Field& u, const Field& du_dt, const Params& params,
                        const SchemeConfig& cfg);

/// Upwind slope magnitude picked by the Godunov Hamiltonian from the
/// backward/forward quotients (dm, dp).
inline double godunov_slope(double dm, double dp) {
    return std::max(std::max(dm, 0.0), std::max(-dp, 0.0));
}

} // namespace fg
