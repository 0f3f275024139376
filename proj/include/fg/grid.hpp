#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "fg/errors.hpp"

namespace fg {

enum class GridKind {
    Interval,  ///< 1D interval (a, b)
    RadialBall ///< radial coordinate of a ball of radius R in dimension N
};

/// Uniform grid over a symmetric 1D interval or the radial coordinate of a
/// ball. Stores the n interior nodes; the homogeneous Dirichlet boundary
/// (both interval ends, or r = R) is implicit and carries the value 0.
/// Radial grids have no node at the origin: the innermost flux face sits at
/// r = 0 where symmetry (even reflection) forces the flux to vanish.
class Grid {
public:
    static Grid interval(double a, double b, int n) {
        if (n < 3) throw DomainError("Grid: need n >= 3 interior points");
        if (!(b > a)) throw DomainError("Grid: empty interval, need b > a");
        Grid g;
        g.kind_ = GridKind::Interval;
        g.n_ = n;
        g.a_ = a;
        g.b_ = b;
        g.dim_ = 1;
        g.h_ = (b - a) / (n + 1);
        g.coords_.resize(n);
        for (int i = 0; i < n; ++i) g.coords_[i] = a + (i + 1) * g.h_;
        return g;
    }

    static Grid radial_ball(double radius, int dim, int n) {
        if (n < 3) throw DomainError("Grid: need n >= 3 interior points");
        if (!(radius > 0.0)) throw DomainError("Grid: ball radius must be positive");
        if (dim < 1) throw DomainError("Grid: ball dimension must be >= 1");
        Grid g;
        g.kind_ = GridKind::RadialBall;
        g.n_ = n;
        g.a_ = 0.0;
        g.b_ = radius;
        g.dim_ = dim;
        g.h_ = radius / (n + 1);
        g.coords_.resize(n);
        for (int i = 0; i < n; ++i) g.coords_[i] = (i + 1) * g.h_;
        return g;
    }

    GridKind kind() const { return kind_; }
    int n() const { return n_; }
    double h() const { return h_; }
    int dim() const { return dim_; }
    double left() const { return a_; }  ///< interval a; 0 for radial grids
    double right() const { return b_; } ///< interval b; R for radial grids
    double radius() const { return b_; }
    double coord(int i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    /// Index of the interior node nearest to x (clamped to the range).
    int nearest_index(double x) const {
        double t = (x - a_) / h_ - 1.0;
        int i = static_cast<int>(std::lround(t));
        if (i < 0) i = 0;
        if (i >= n_) i = n_ - 1;
        return i;
    }

    /// Domain length (interval) or radius extent covered by the grid.
    double extent() const { return b_ - a_; }

    /// Lebesgue measure of the domain, including the angular factor for balls.
    double measure() const {
        if (kind_ == GridKind::Interval) return b_ - a_;
        return sphere_area(dim_) * std::pow(b_, dim_) / dim_;
    }

    /// Quadrature weight of interior node i (trapezoid rule, radial measure
    /// included for balls). Boundary nodes carry value 0 so their weights
    /// never enter integrals of the solution.
    double node_weight(int i) const {
        if (kind_ == GridKind::Interval) return h_;
        double r = coords_[i];
        return sphere_area(dim_) * std::pow(r, dim_ - 1) * h_;
    }

    /// Surface area of the unit sphere in dimension N (2 for N = 1).
    static double sphere_area(int dim) {
        if (dim == 1) return 2.0;
        if (dim == 2) return 2.0 * M_PI;
        if (dim == 3) return 4.0 * M_PI;
        // Gamma-function form for general N
        return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
    }

    bool same_as(const Grid& o) const {
        return kind_ == o.kind_ && n_ == o.n_ && dim_ == o.dim_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    GridKind kind_ = GridKind::Interval;
    int n_ = 0;
    int dim_ = 1;
    double a_ = 0.0, b_ = 1.0, h_ = 0.0;
    std::vector<double> coords_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// A solution snapshot on a grid: interior nodal values plus a time stamp.
/// Boundary values are identically 0 by the Dirichlet condition and are not
/// stored; exports write them explicitly.
struct Field {
    GridPtr grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    Field(GridPtr g, double t = 0.0) : grid(std::move(g)), values(grid->n(), 0.0), time(t) {}
    Field(GridPtr g, std::vector<double> v, double t = 0.0)
        : grid(std::move(g)), values(std::move(v)), time(t) {
        if (static_cast<int>(values.size()) != grid->n())
            throw GridMismatch("Field: value count does not match grid");
    }

    int n() const { return grid->n(); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }
};

inline void require_same_grid(const Field& u, const Field& w, const char* where) {
    if (!u.grid || !w.grid || !u.grid->same_as(*w.grid))
        throw GridMismatch(std::string(where) + ": fields live on different grids");
}

/// Max of |value| over interior nodes.
inline double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

/// Max adjacent difference quotient over interior node pairs.
inline double lipschitz_estimate(const Field& f) {
    double m = 0.0;
    const double h = f.grid->h();
    for (int i = 0; i + 1 < f.n(); ++i)
        m = std::max(m, std::abs(f.values[i + 1] - f.values[i]) / h);
    return m;
}

/// Max difference quotient including the pairs against the Dirichlet
/// boundary zeros. This is the global Lipschitz constant of the field
/// extended by its boundary condition; for decaying profiles the maximum
/// slope sits at the boundary, so this is the quantity the gradient bounds
/// control.
inline double lipschitz_with_boundary(const Field& f) {
    double m = lipschitz_estimate(f);
    const double h = f.grid->h();
    m = std::max(m, std::abs(f.values[f.n() - 1]) / h);
    if (f.grid->kind() == GridKind::Interval)
        m = std::max(m, std::abs(f.values[0]) / h);
    return m;
}

/// Max over boundary-adjacent nodes of |u|/h (the discrete normal
/// derivative at the Dirichlet boundary). Input to the no-boundary-loss
/// monitor.
inline double boundary_quotient(const Field& f) {
    const double h = f.grid->h();
    double m = std::abs(f.values[f.n() - 1]) / h;
    if (f.grid->kind() == GridKind::Interval)
        m = std::max(m, std::abs(f.values[0]) / h);
    return m;
}

inline bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool nonnegative(const Field& f) {
    for (double v : f.values)
        if (v < 0.0) return false;
    return true;
}

} // namespace fg
