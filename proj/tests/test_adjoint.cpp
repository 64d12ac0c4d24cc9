#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/adjoint.hpp"
#include "mfg/strong_solver.hpp"

using namespace mfg;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

LinearizationCoeffs identity_coeffs(const TorusGrid& g) {
    SmallMat A(g.dim, g.dim);
    A.setIdentity();
    SmallVec zero(g.dim);
    zero.setZero();
    return constant_coeffs(g, A, -1.0, zero, zero);
}

AdjointProblem mode_problem(int n, double upsilon0 = 2.0) {
    const TorusGrid g = make_grid(1, n);
    AdjointProblem p;
    p.coeffs = identity_coeffs(g);
    p.zeta = ScalarField::sample(g, [](const std::array<double, 2>& x) {
        return std::cos(kTwoPi * x[0]);
    });
    p.upsilon0 = upsilon0;
    return p;
}

}  // namespace

TEST_CASE("weighted norm matches the closed form") {
    const TorusGrid g = make_grid(1, 64);
    const LinearizationCoeffs coeffs = identity_coeffs(g);
    const ScalarField v = ScalarField::sample(g, [](const std::array<double, 2>& x) {
        return std::cos(kTwoPi * x[0]);
    });
    // integral of (4 pi^2 sin^2 + cos^2) = 2 pi^2 + 1/2
    CHECK(norm_X_squared(coeffs, v) == doctest::Approx(2.0 * M_PI * M_PI + 0.5).epsilon(1e-12));
    CHECK(norm_X(coeffs, v) == doctest::Approx(std::sqrt(2.0 * M_PI * M_PI + 0.5)).epsilon(1e-12));
    CHECK(norm_X(coeffs, 3.0 * v) == doctest::Approx(3.0 * norm_X(coeffs, v)).epsilon(1e-12));
}

TEST_CASE("single Fourier mode is solved exactly") {
    const AdjointProblem p = mode_problem(32);
    auto [vbar, rep] = solve_adjoint(p);
    const double factor = 1.0 / (1.0 + 4.0 * M_PI * M_PI);
    double err = 0.0;
    for (std::size_t i = 0; i < vbar.grid.size(); ++i)
        err = std::max(err, std::fabs(vbar.values[i] - factor * p.zeta.values[i]));
    CHECK(err <= 1e-10);
    CHECK_FALSE(rep.kernel_suspected);
    CHECK(rep.residual <= 1e-10);
    CHECK(std::isfinite(rep.finiteness));
}

TEST_CASE("shifted Fredholm route is independent of the shift") {
    const ScalarField direct = solve_adjoint(mode_problem(32)).first;
    const ScalarField via2 = solve_adjoint_fredholm(mode_problem(32, 2.0));
    const ScalarField via4 = solve_adjoint_fredholm(mode_problem(32, 4.0));
    CHECK((via2 - direct).max_abs() <= 1e-9);
    CHECK((via2 - via4).max_abs() <= 1e-9);
}

TEST_CASE("shift below the coercivity threshold is rejected") {
    AdjointProblem p = mode_problem(32, 1.0);
    CHECK_THROWS(p.validate());
}

TEST_CASE("pure second-order operator trips the kernel check") {
    const TorusGrid g = make_grid(1, 32);
    AdjointProblem p;
    SmallMat A(1, 1);
    A.setIdentity();
    SmallVec zero(1);
    zero.setZero();
    p.coeffs = constant_coeffs(g, A, 0.0, zero, zero);  // constants lie in the kernel
    std::fill(p.coeffs.kappa.begin(), p.coeffs.kappa.end(), 1.0);  // keep the norm nondegenerate
    p.zeta = ScalarField::constant(g, 1.0);
    CHECK_THROWS_WITH_AS(static_cast<void>(solve_adjoint(p)), doctest::Contains("kernel"), std::runtime_error);
}

TEST_CASE("lemma-style inequalities hold on assembled coefficients") {
    const TorusGrid g = make_grid(1, 32);
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = 0.2;
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, {mode});
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    AdjointProblem p;
    p.coeffs = assemble_coeffs(spec, w);
    p.zeta = ScalarField::constant(g, 1.0);

    const InequalityReport shift = verify_coercive_shift(p, 100);
    CHECK(shift.pass);
    CHECK(shift.min_slack >= -1e-9);

    const InequalityReport bound = verify_boundedness(p.coeffs, 100);
    CHECK(bound.pass);
    CHECK(bound.min_slack >= -1e-9);

    const InequalityReport embed = verify_embeddings(p.coeffs.sigma, p.coeffs.kappa, 0.5, kInf, 100);
    CHECK(embed.pass);
}

TEST_CASE("pointwise coercivity certificate at the constant solution") {
    const TorusGrid g = make_grid(1, 32);
    const LinearizationCoeffs coeffs = identity_coeffs(g);
    // kappa = |a| = 1, so eps*(kappa - |a|) + a = -1 <= -theta for theta <= 1
    CHECK(check_coercivity_sufficient(coeffs, 1.0, 0.5));
    CHECK_FALSE(check_coercivity_sufficient(coeffs, 1.0, 1.5));
}

TEST_CASE("discrete operator is consistent with the bilinear form") {
    const TorusGrid g = make_grid(1, 32);
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = 0.15;
    const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, {mode});
    auto [w, rep] = solve_strong(spec, g);
    REQUIRE(rep.converged);
    AdjointProblem p;
    p.coeffs = assemble_coeffs(spec, w);
    p.zeta = ScalarField::constant(g, 0.0);
    const Eigen::MatrixXd L = assemble_discrete_L(p);

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField u = random_trig_polynomial(g, g.n / 4, rng);
        const ScalarField v = random_trig_polynomial(g, g.n / 4, rng);
        Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.values.data(), g.size());
        ScalarField Lu = ScalarField::zeros(g);
        Eigen::VectorXd Luv = L * uv;
        std::copy(Luv.data(), Luv.data() + g.size(), Lu.values.begin());
        // <L u, v> computed by quadrature must equal B[u, v]
        const double lhs = integrate(hadamard(Lu, v));
        const double rhs = bilinear_B(p.coeffs, u, v);
        CHECK(std::fabs(lhs - rhs) <= 1e-9 * (1.0 + std::fabs(rhs)));
    }
}
