#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/strong_solver.hpp"

using namespace mfg;

namespace {

std::vector<TrigMode> cos_potential(double amp) {
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = amp;
    return {mode};
}

}  // namespace

TEST_CASE("zero viscosity reduces to the plain operator") {
    const TorusGrid g = make_grid(1, 32);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.3));
    const FieldPair w = random_test_pair(g, g.n / 4, 0.2, 21);
    const FieldPair r0 = residual_with_viscosity(spec, w, 0.0);
    const FieldPair r = apply_operator(spec, w);
    CHECK((r0.m - r.m).max_abs() == 0.0);
    CHECK((r0.u - r.u).max_abs() == 0.0);
}

TEST_CASE("jacobian matches a finite-difference oracle") {
    const TorusGrid g = make_grid(1, 32);
    for (const HamiltonianSpec& spec :
         {make_power_spec(3.0, CouplingG{}, cos_potential(0.2)), make_congestion_spec(2.0, 0.5)}) {
        const FieldPair w = random_test_pair(g, g.n / 4, 0.5, 31);
        const FieldPair dir = random_test_pair(g, g.n / 4, 0.1, 32);
        const double eps = 1e-2;
        const double h = 1e-6;
        const FieldPair jd = jacobian_apply(spec, w, dir, eps);
        const FieldPair fd =
            (1.0 / (2.0 * h)) * (residual_with_viscosity(spec, w + h * dir, eps) -
                                 residual_with_viscosity(spec, w - h * dir, eps));
        const double scale = 1.0 + jd.m.max_abs() + jd.u.max_abs();
        CHECK((jd.m - fd.m).max_abs() <= 1e-5 * scale);
        CHECK((jd.u - fd.u).max_abs() <= 1e-5 * scale);
    }
}

TEST_CASE("power constant solution is recovered to machine precision") {
    const TorusGrid g = make_grid(1, 64);
    auto [w, rep] = solve_strong(make_power_spec(2.0, CouplingG{}), g);
    REQUIRE(rep.converged);
    CHECK(rep.residual <= 1e-12);
    double em = 0.0, eu = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        em = std::max(em, std::fabs(w.m.values[i] - 1.0));
        eu = std::max(eu, std::fabs(w.u.values[i] - 0.5));
    }
    CHECK(em <= 1e-12);
    CHECK(eu <= 1e-12);
    CHECK(rep.c0_hat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("congestion constant solution is recovered") {
    const TorusGrid g = make_grid(1, 64);
    auto [w, rep] = solve_strong(make_congestion_spec(2.0, 1.0), g);
    REQUIRE(rep.converged);
    CHECK(rep.residual <= 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::fabs(w.m.values[i] - 1.0) <= 1e-12);
        CHECK(std::fabs(w.u.values[i] + 0.5) <= 1e-12);
    }
}

TEST_CASE("solutions self-converge under grid refinement") {
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
    auto [w32, rep32] = solve_strong(spec, make_grid(1, 32));
    auto [w64, rep64] = solve_strong(spec, make_grid(1, 64));
    REQUIRE(rep32.converged);
    REQUIRE(rep64.converged);
    double err = 0.0;
    for (int i = 0; i < 32; ++i) {
        err = std::max(err, std::fabs(w32.m.values[i] - w64.m.values[2 * i]));
        err = std::max(err, std::fabs(w32.u.values[i] - w64.u.values[2 * i]));
    }
    CHECK(err <= 1e-7);
}

TEST_CASE("solver works in two dimensions") {
    TrigMode mode;
    mode.k = {1, 1};
    mode.cos_coef = 0.1;
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, {mode});
    auto [w, rep] = solve_strong(spec, make_grid(2, 16));
    REQUIRE(rep.converged);
    CHECK(rep.residual <= 1e-8);
    CHECK(rep.c0_hat > 0.0);
    CHECK(std::fabs(integrate(w.m) - 1.0) <= 1e-8);
}

TEST_CASE("invalid options are rejected") {
    SolverOptions opts;
    opts.newton_tol = -1.0;
    CHECK_THROWS(opts.validate());
    opts = SolverOptions{};
    opts.visc_schedule = {1e-2, 1e-1};  // must decrease
    CHECK_THROWS(opts.validate());
}
