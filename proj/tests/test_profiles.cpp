#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fg/profiles.hpp"

using namespace fg;

namespace {

EvolveConfig march_cfg(double tol = 1e-9) {
    EvolveConfig cfg;
    cfg.t_end = 400.0;
    cfg.record_every = 0.5;
    cfg.steady_tol = tol;
    return cfg;
}

} // namespace

TEST_CASE("shot profile: symmetric, positive, decreasing from the centre") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 100);
    Profile f = shoot_profile_f(pr, g, ShootingConfig{});
    const int n = g.n();
    for (int i = 0; i < n; ++i) {
        CHECK(f.field.values[i] > 0.0);
        CHECK(f.field.values[i] == doctest::Approx(f.field.values[n - 1 - i]));
    }
    for (int i = n / 2; i + 1 < n; ++i)
        CHECK(f.field.values[i + 1] < f.field.values[i]);
    CHECK(f.sup_norm > 0.0);
    CHECK(std::isfinite(f.grad_sup_norm));
    // the grid Lipschitz quotient approximates the ODE gradient norm
    CHECK(f.lipschitz_const ==
          doctest::Approx(f.grad_sup_norm).epsilon(5.0 * g.h()));
}

TEST_CASE("profile ordering: f dominates f0 at every interior node") {
    for (double p : {2.5, 3.0, 4.0}) {
        Params pr = make_params(p, p - 1.0, 1);
        Grid g = Grid::interval(-1.0, 1.0, 80);
        Profile f = shoot_profile_f(pr, g, ShootingConfig{});
        Profile f0 = shoot_profile_f0(pr, g, ShootingConfig{});
        for (int i = 0; i < g.n(); ++i)
            CHECK(f.field.values[i] > f0.field.values[i]);
    }
}

TEST_CASE("shooting propagates bracket and convergence failures") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 60);
    ShootingConfig sc;
    sc.max_iter = 3;
    CHECK_THROWS_AS(shoot_profile_f(pr, g, sc), NonConvergence);
}

TEST_CASE("march agrees with shoot to the scheme's first-order accuracy") {
    // The marched profile is the monotone scheme's fixed point; its distance
    // to the ODE profile is first order in h (measured constant ~0.36 for f,
    // far smaller for f0 where the flux part is second order).
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 100);
    Profile fs = shoot_profile_f(pr, g, ShootingConfig{});
    Profile fm = march_profile(pr, g, ProfileKind::F_withSource, march_cfg(), SchemeConfig{});
    CHECK(profile_max_distance(fs, fm) < 0.6 * g.h());

    Profile f0s = shoot_profile_f0(pr, g, ShootingConfig{});
    Profile f0m = march_profile(pr, g, ProfileKind::F0_pure, march_cfg(), SchemeConfig{});
    CHECK(profile_max_distance(f0s, f0m) < 1e-3 * f0s.sup_norm);
}

TEST_CASE("march is initial-guess independent") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 60);
    auto gp = std::make_shared<Grid>(g);
    Field g1(gp), g2(gp);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(i);
        const double c = std::cos(0.5 * M_PI * x);
        g1.values[i] = 0.2 * c * c;
        g2.values[i] = 2.0 * std::pow(c, 4.0);
    }
    EvolveConfig cfg = march_cfg(1e-11);
    Profile m1 = march_profile(pr, g, ProfileKind::F_withSource, cfg, SchemeConfig{}, &g1);
    Profile m2 = march_profile(pr, g, ProfileKind::F_withSource, cfg, SchemeConfig{}, &g2);
    CHECK(profile_max_distance(m1, m2) < 1e-6);
}

TEST_CASE("marching from the marched profile is immediately steady") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 60);
    Profile fm = march_profile(pr, g, ProfileKind::F_withSource, march_cfg(1e-10),
                               SchemeConfig{});
    EvolveConfig cfg = march_cfg(1e-8);
    Profile again = march_profile(pr, g, ProfileKind::F_withSource, cfg, SchemeConfig{},
                                  &fm.field);
    CHECK(profile_max_distance(fm, again) < 1e-8);
}

TEST_CASE("giant residual: scaling covariance is exact and n=200 magnitude is small") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 200);
    Profile f = shoot_profile_f(pr, g, ShootingConfig{});
    Field r1 = giant_residual(f, pr, 1.0, SchemeConfig{});
    Field r4 = giant_residual(f, pr, 4.0, SchemeConfig{});
    // residual(t) = t^(-(p-1)/(p-2)) residual(1): the discrete operators are
    // (p-1)-homogeneous, so the identity holds to round-off
    const double scale = std::pow(4.0, -2.0);
    for (int i = 0; i < g.n(); ++i)
        CHECK(r4.values[i] == doctest::Approx(scale * r1.values[i]).epsilon(1e-12));
    CHECK(sup_norm(r1) < 0.05 * f.sup_norm);
}

TEST_CASE("giant residual refines at first order away from the degenerate centre") {
    // At the centre f has bounded gradient but unbounded curvature
    // (f ~ f(0) - c |x|^(p/(p-1))), so second-difference residuals carry an
    // O(1) spike on the two straddling nodes; outside a fixed neighbourhood
    // the residual is first order.
    Params pr = make_params(3.0, 2.0, 1);
    double prev = 0.0, rate = 0.0;
    for (int n : {100, 200, 400}) {
        Grid g = Grid::interval(-1.0, 1.0, n);
        Profile f = shoot_profile_f(pr, g, ShootingConfig{});
        Field res = giant_residual(f, pr, 1.0, SchemeConfig{});
        double err = 0.0;
        for (int i = 0; i < g.n(); ++i)
            if (std::abs(g.coord(i)) > 0.05) err = std::max(err, std::abs(res.values[i]));
        if (prev > 0.0) rate = std::log2(prev / err);
        prev = err;
    }
    CHECK(rate >= 0.9);
}

TEST_CASE("zero profile has zero residual") {
    Params pr = make_params(3.0, 2.0, 1);
    Grid g = Grid::interval(-1.0, 1.0, 40);
    Profile z;
    z.field = Field(std::make_shared<Grid>(g));
    z.kind = ProfileKind::F_withSource;
    Field res = giant_residual(z, pr, 1.0, SchemeConfig{});
    CHECK(sup_norm(res) == 0.0);
}

TEST_CASE("radial ball profiles: positive, decreasing, f > f0") {
    Params pr = make_params(3.0, 2.0, 2);
    Grid g = Grid::radial_ball(1.0, 2, 80);
    Profile f = shoot_profile_f(pr, g, ShootingConfig{});
    Profile f0 = shoot_profile_f0(pr, g, ShootingConfig{});
    for (int i = 0; i < g.n(); ++i) {
        CHECK(f.field.values[i] > 0.0);
        CHECK(f.field.values[i] > f0.field.values[i]);
        if (i > 0) CHECK(f.field.values[i] < f.field.values[i - 1]);
    }
}
