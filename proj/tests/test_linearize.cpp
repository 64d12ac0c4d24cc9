#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/linearize.hpp"
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

TEST_CASE("coefficients at the power constant solution") {
    const TorusGrid g = make_grid(1, 32);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{});
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::fabs(coeffs.A[i](0, 0) - 1.0) <= 1e-12);
        CHECK(std::fabs(coeffs.a[i] + 1.0) <= 1e-12);
        CHECK(std::fabs(coeffs.b[i][0]) <= 1e-12);
        CHECK(std::fabs(coeffs.c[i][0]) <= 1e-12);
        CHECK(std::fabs(coeffs.kappa[i] - 1.0) <= 1e-12);
    }
    CHECK(coeffs.sigma.min() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coeffs.tau == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coefficients at the congestion constant solution") {
    const TorusGrid g = make_grid(1, 32);
    const HamiltonianSpec spec = make_congestion_spec(2.0, 1.0);
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::fabs(coeffs.a[i] + 2.0) <= 1e-12);
        CHECK(std::fabs(coeffs.kappa[i] - 2.0) <= 1e-12);
    }
}

TEST_CASE("kappa cross-reconstruction agrees with the stored values") {
    const TorusGrid g = make_grid(1, 64);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);
    const std::vector<double> again = recompute_kappa(coeffs);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::fabs(again[i] - coeffs.kappa[i]) <= 1e-10 * (1.0 + std::fabs(coeffs.kappa[i])));
}

TEST_CASE("eliminating the density reproduces the scalar elliptic equation") {
    const TorusGrid g = make_grid(1, 64);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);

    std::mt19937_64 rng(41);
    const ScalarField vbar = random_trig_polynomial(g, g.n / 4, rng);
    const VectorField dv = gradient(vbar);
    // density component forced by the second linearized equation
    FieldPair dir = FieldPair::zeros(g);
    dir.u = vbar;
    for (std::size_t i = 0; i < g.size(); ++i)
        dir.m.values[i] = coeffs.a[i] * vbar.values[i] + coeffs.c[i].dot(point_vector(dv, i));

    const FieldPair lin = linearized_operator(spec, w, dir);
    const ScalarField elim = eliminated_elliptic_residual(coeffs, vbar);
    const double scale = 1.0 + elim.max_abs();
    // second equation is satisfied identically by construction
    CHECK(lin.u.max_abs() <= 1e-9 * scale);
    // first equation collapses onto the eliminated scalar equation
    CHECK((lin.m - elim).max_abs() <= 1e-8 * scale);
}

TEST_CASE("strict monotonicity margins at the constant solutions") {
    const TorusGrid g = make_grid(1, 32);
    {
        auto [w, rep] = solve_strong(make_power_spec(2.0, CouplingG{}), g);
        REQUIRE(rep.converged);
        const A3monReport a3 = check_A3mon(make_power_spec(2.0, CouplingG{}), w);
        CHECK(a3.pass);
        CHECK(a3.global_min == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        auto [w, rep] = solve_strong(make_congestion_spec(2.0, 1.0), g);
        REQUIRE(rep.converged);
        const A3monReport a3 = check_A3mon(make_congestion_spec(2.0, 1.0), w);
        CHECK(a3.pass);
        CHECK(a3.global_min == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("congestion ellipticity weight dominates the density power") {
    const TorusGrid g = make_grid(1, 64);
    const HamiltonianSpec spec = make_congestion_spec(2.0, 0.5, cos_potential(0.2));
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(coeffs.sigma.values[i] >= std::pow(w.m.values[i], 1.0 - spec.alpha) - 1e-10);
}

TEST_CASE("quadratic form is quadratic in the direction") {
    const TorusGrid g = make_grid(1, 32);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    FieldPair dir = FieldPair::zeros(g);
    std::mt19937_64 rng(51);
    dir.m = random_trig_polynomial(g, g.n / 4, rng);
    dir.u = random_trig_polynomial(g, g.n / 4, rng);
    const double base = quadratic_form_Q(spec, w, dir);
    for (double delta : {1e-3, 1e-2, 1e-1}) {
        const double q = quadratic_form_Q(spec, w, delta * dir);
        CHECK(q / (delta * delta) == doctest::Approx(base).epsilon(1e-8));
    }
    CHECK(base > 0.0);  // strictly monotone family
}

TEST_CASE("exponent witness exists for well-behaved coefficients") {
    const TorusGrid g = make_grid(1, 32);
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    const LinearizationCoeffs coeffs = assemble_coeffs(spec, w);
    const auto witness = search_exponent_witness(coeffs, 1);
    REQUIRE(witness.has_value());
    CHECK(witness->beta == kInf);  // kappa is bounded, so the strongest beta is admissible
    CHECK(witness->sigma_integral > 0.0);
}
