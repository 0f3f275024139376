#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fg/evolve.hpp"

using namespace fg;

namespace {

GridPtr unit_interval(int n) {
    return std::make_shared<Grid>(Grid::interval(-1.0, 1.0, n));
}

Field bump(GridPtr g, double amp, double power = 2.0) {
    Field f(g, 0.0);
    const double c = 0.5 * (g->left() + g->right());
    const double half = 0.5 * (g->right() - g->left());
    for (int i = 0; i < f.n(); ++i) {
        const double s = std::sin(0.5 * M_PI * (1.0 - std::abs(g->coord(i) - c) / half));
        f.values[i] = amp * std::pow(s, power);
    }
    return f;
}

} // namespace

TEST_CASE("zero field is a fixed point; dt falls back to the cap") {
    auto g = unit_interval(21);
    Field zero(g);
    Params pr = make_params(3.0, 2.0, 1);
    EvolveConfig cfg;
    CHECK(propose_dt(zero, pr, cfg) == std::numeric_limits<double>::infinity());
    auto [next, dt] = step(zero, pr, cfg, SchemeConfig{}, 0.37);
    CHECK(dt == doctest::Approx(0.37));
    CHECK(sup_norm(next) == 0.0);
    CHECK_THROWS_AS(step(zero, pr, cfg, SchemeConfig{}), DomainError);
}

TEST_CASE("dt matches the stated CFL bounds") {
    auto g = unit_interval(40);
    Params pr = make_params(3.0, 4.0, 1);
    EvolveConfig cfg;
    cfg.cfl_safety = 0.5;
    Field f = bump(g, 2.0);
    const auto slopes = face_slopes(f);
    double m = 0.0;
    for (double s : slopes) m = std::max(m, std::abs(s));
    const double h = g->h();
    const double want = 0.5 * std::min(h * h / (2.0 * 2.0 * std::pow(m, 1.0)),
                                       h / (4.0 * std::pow(m, 3.0)));
    CHECK(propose_dt(f, pr, cfg) == doctest::Approx(want));
}

TEST_CASE("evolve rejects inadmissible initial data") {
    auto g = unit_interval(11);
    Params pr = make_params(3.0, 2.0, 1);
    EvolveConfig cfg;
    cfg.t_end = 0.01;
    Field zero(g);
    CHECK_THROWS_AS(evolve(zero, pr, cfg, SchemeConfig{}), DomainError);
    cfg.allow_zero_init = true;
    Trajectory tz = evolve(zero, pr, cfg, SchemeConfig{});
    CHECK(sup_norm(tz.back()) == 0.0);

    Field neg(g);
    neg.values[3] = -0.1;
    CHECK_THROWS_AS(evolve(neg, pr, cfg, SchemeConfig{}), DomainError);
}

TEST_CASE("nonnegativity and sup-norm decay in the giant regime") {
    auto g = unit_interval(60);
    Params pr = make_params(3.0, 2.0, 1);
    EvolveConfig cfg;
    cfg.t_end = 0.5;
    cfg.record_every = 0.05;
    Trajectory t = evolve(bump(g, 1.0), pr, cfg, SchemeConfig{});
    double prev = std::numeric_limits<double>::infinity();
    for (const Field& u : t.snapshots) {
        CHECK(nonnegative(u));
        const double s = sup_norm(u);
        CHECK(s <= prev * (1.0 + 1e-12));
        prev = s;
    }
    CHECK(t.snapshots.size() == 11);
    for (size_t k = 0; k + 1 < t.snapshots.size(); ++k)
        CHECK(t.snapshots[k].time < t.snapshots[k + 1].time);
}

TEST_CASE("synchronized ordered pairs stay ordered (monotone scheme)") {
    auto g = unit_interval(50);
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> ua(0.05, 0.3), ub(0.0, 0.2), uk(1.0, 3.0);
    for (double q : {2.0, 2.5, 4.0}) {
        Params pr = make_params(3.0, q, 1);
        EvolveConfig cfg;
        cfg.t_end = 0.05;
        cfg.record_every = 0.01;
        for (int trial = 0; trial < 10; ++trial) {
            Field u0 = bump(g, ua(rng), uk(rng));
            Field w0 = u0;
            Field extra = bump(g, ub(rng), uk(rng));
            for (int i = 0; i < w0.n(); ++i) w0.values[i] += extra.values[i];
            auto [tu, tw] = evolve_pair(u0, w0, pr, cfg, SchemeConfig{});
            REQUIRE(tu.snapshots.size() == tw.snapshots.size());
            for (size_t k = 0; k < tu.snapshots.size(); ++k) {
                double worst = 0.0;
                for (int i = 0; i < g->n(); ++i)
                    worst = std::max(worst, tu.snapshots[k].values[i] -
                                                tw.snapshots[k].values[i]);
                CHECK(worst <= 1e-12 * std::max(1.0, sup_norm(tw.snapshots[k])));
            }
        }
    }
}

TEST_CASE("blowup guard fires for large data in the super regime") {
    auto g = unit_interval(80);
    Params pr = make_params(3.0, 4.0, 1);
    EvolveConfig cfg;
    cfg.t_end = 10.0;
    cfg.record_every = 0.05;
    cfg.grad_cap = 100.0; // low cap so the unit test stays fast
    cfg.dt_min = 1e-10;
    Trajectory t = evolve(bump(g, 8.0), pr, cfg, SchemeConfig{});
    REQUIRE(t.has_event(EventKind::BlowupGuard));
    const Event& e = t.events.back();
    CHECK(e.time < 10.0);
    CHECK(e.value > 100.0);
    CHECK(e.node >= 0);
}

TEST_CASE("rescale round trip and the separate-variables form") {
    auto g = unit_interval(30);
    Field u = bump(g, 0.7);
    u.time = 7.3;
    Field v = rescale_to_v(u, 3.0);
    CHECK(v.time == doctest::Approx(std::log(7.3)));
    Field back = rescale_from_v(v, 3.0);
    CHECK(back.time == doctest::Approx(7.3));
    for (int i = 0; i < u.n(); ++i)
        CHECK(back.values[i] == doctest::Approx(u.values[i]).epsilon(1e-14));

    // u(t) = t^(-1/(p-2)) f gives v(s) = f for all s
    Field u1 = bump(g, 0.4);
    u1.time = 1.0;
    Field v1 = rescale_to_v(u1, 3.0);
    CHECK(v1.time == doctest::Approx(0.0));
    for (int i = 0; i < u1.n(); ++i)
        CHECK(v1.values[i] == doctest::Approx(u1.values[i]));

    Field u5 = u1;
    u5.time = 5.0;
    for (auto& x : u5.values) x /= 5.0; // p = 3: t^(-1)
    Field v5 = rescale_to_v(u5, 3.0);
    for (int i = 0; i < u1.n(); ++i)
        CHECK(v5.values[i] == doctest::Approx(u1.values[i]).epsilon(1e-14));

    Field bad = bump(g, 0.1);
    bad.time = 0.0;
    CHECK_THROWS_AS(rescale_to_v(bad, 3.0), DomainError);
}

TEST_CASE("rescaled run reaches a steady state and the prefactor is 1 at q = p-1") {
    auto g = unit_interval(40);
    Params pr = make_params(3.0, 2.0, 1);
    EvolveConfig cfg;
    cfg.t_end = 100.0;
    cfg.record_every = 0.5;
    cfg.steady_tol = 1e-7;
    Trajectory t = evolve_rescaled(bump(g, 0.5), pr, cfg, SchemeConfig{});
    REQUIRE(t.has_event(EventKind::SteadyState));
    // q = p-1: the decaying mode coincides with the frozen one
    Trajectory t2 = evolve_rescaled(bump(g, 0.5), pr, cfg, SchemeConfig{},
                                    SourceMode::RescaledFrozenGiant);
    REQUIRE(t2.has_event(EventKind::SteadyState));
    for (int i = 0; i < g->n(); ++i)
        CHECK(t.back().values[i] ==
              doctest::Approx(t2.back().values[i]).epsilon(1e-10));
}
