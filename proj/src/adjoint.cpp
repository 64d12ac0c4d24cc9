#include "mfg/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

Eigen::MatrixXd differentiation_matrix(const TorusGrid& g, int axis) {
    const std::size_t N = g.size();
    Eigen::MatrixXd G(N, N);
    ScalarField e = ScalarField::zeros(g);
    for (std::size_t j = 0; j < N; ++j) {
        e.values[j] = 1.0;
        const ScalarField col = partial_derivative(e, axis);
        for (std::size_t i = 0; i < N; ++i) G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col.values[i];
        e.values[j] = 0.0;
    }
    return G;
}

Eigen::VectorXd to_vec(const ScalarField& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
}

ScalarField from_vec(const TorusGrid& g, const Eigen::VectorXd& v) {
    ScalarField f = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = v[static_cast<Eigen::Index>(i)];
    return f;
}

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p)) return f.max_abs();
    ScalarField tmp = f;
    for (double& v : tmp.values) v = std::pow(std::fabs(v), p);
    return std::pow(integrate(tmp), 1.0 / p);
}

}  // namespace

void AdjointProblem::validate() const {
    if (!(upsilon0 > 1.5)) throw std::invalid_argument("upsilon0 must exceed 3/2");
    for (double k : coeffs.kappa)
        if (!(k > 0.0)) throw std::invalid_argument("kappa must be positive everywhere");
    if (!(zeta.grid == coeffs.grid)) throw std::invalid_argument("zeta grid mismatch");
}

double norm_X_squared(const LinearizationCoeffs& coeffs, const ScalarField& v) {
    const TorusGrid& g = coeffs.grid;
    const VectorField Dv = gradient(v);
    ScalarField integrand = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SmallVec dv = point_vector(Dv, i);
        integrand.values[i] = dv.dot(coeffs.A[i] * dv) + coeffs.kappa[i] * v.values[i] * v.values[i];
    }
    return integrate(integrand);
}

double norm_X(const LinearizationCoeffs& coeffs, const ScalarField& v) {
    return std::sqrt(std::fmax(0.0, norm_X_squared(coeffs, v)));
}

double bilinear_B(const LinearizationCoeffs& coeffs, const ScalarField& u, const ScalarField& v) {
    const TorusGrid& g = coeffs.grid;
    const VectorField Du = gradient(u);
    const VectorField Dv = gradient(v);
    ScalarField integrand = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SmallVec du = point_vector(Du, i);
        const SmallVec dv = point_vector(Dv, i);
        integrand.values[i] = dv.dot(coeffs.A[i] * du) - v.values[i] * coeffs.c[i].dot(du) +
                              u.values[i] * coeffs.b[i].dot(dv) - coeffs.a[i] * u.values[i] * v.values[i];
    }
    return integrate(integrand);
}

Eigen::MatrixXd assemble_discrete_L(const AdjointProblem& problem) {
    const LinearizationCoeffs& cf = problem.coeffs;
    const TorusGrid& g = cf.grid;
    const std::size_t N = g.size();
    const int d = g.dim;

    std::vector<Eigen::MatrixXd> G;
    for (int a = 0; a < d; ++a) G.push_back(differentiation_matrix(g, a));

    auto diag_field = [&](auto getter) {
        Eigen::VectorXd v(N);
        for (std::size_t i = 0; i < N; ++i) v[static_cast<Eigen::Index>(i)] = getter(i);
        return v;
    };

    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi) {
            const Eigen::VectorXd Aab = diag_field([&](std::size_t i) { return cf.A[i](ai, bi); });
            L += G[ai].transpose() * Aab.asDiagonal() * G[bi];
        }
    for (int ai = 0; ai < d; ++ai) {
        const Eigen::VectorXd ca = diag_field([&](std::size_t i) { return cf.c[i][ai]; });
        const Eigen::VectorXd ba = diag_field([&](std::size_t i) { return cf.b[i][ai]; });
        L -= Eigen::MatrixXd(ca.asDiagonal()) * G[ai];
        L += G[ai].transpose() * Eigen::MatrixXd(ba.asDiagonal());
    }
    L -= Eigen::MatrixXd(diag_field([&](std::size_t i) { return cf.a[i]; }).asDiagonal());
    return L;
}

double kernel_check(const Eigen::MatrixXd& L) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(L);
    return svd.singularValues().minCoeff();
}

std::pair<ScalarField, AdjointReport> solve_adjoint(const AdjointProblem& problem) {
    problem.validate();
    const Eigen::MatrixXd L = assemble_discrete_L(problem);
    AdjointReport rep;
    rep.sigma_min_L = kernel_check(L);
    const double scale = L.cwiseAbs().maxCoeff();
    if (rep.sigma_min_L < 1e-10 * scale) {
        rep.kernel_suspected = true;
        throw std::runtime_error("kernel suspected: smallest singular value of L is below the scaled threshold");
    }
    const Eigen::VectorXd zeta = to_vec(problem.zeta);
    const Eigen::VectorXd v = Eigen::PartialPivLU<Eigen::MatrixXd>(L).solve(zeta);
    rep.residual = (L * v - zeta).cwiseAbs().maxCoeff();
    const ScalarField vf = from_vec(problem.coeffs.grid, v);
    rep.finiteness = norm_X_squared(problem.coeffs, vf);
    rep.norm_X_solution = std::sqrt(std::fmax(0.0, rep.finiteness));
    return {vf, rep};
}

ScalarField solve_adjoint_fredholm(const AdjointProblem& problem) {
    problem.validate();
    const TorusGrid& g = problem.coeffs.grid;
    const std::size_t N = g.size();
    const Eigen::MatrixXd L = assemble_discrete_L(problem);
    Eigen::VectorXd kappa(N);
    for (std::size_t i = 0; i < N; ++i) kappa[static_cast<Eigen::Index>(i)] = problem.coeffs.kappa[i];

    const Eigen::MatrixXd Lups = L + Eigen::MatrixXd(problem.upsilon0 * kappa.asDiagonal());
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Lups);
    const Eigen::VectorXd rhs = lu.solve(to_vec(problem.zeta));
    const Eigen::MatrixXd K = lu.solve(Eigen::MatrixXd(kappa.asDiagonal()));
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N) - problem.upsilon0 * K;
    return from_vec(g, Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs));
}

InequalityReport verify_coercive_shift(const AdjointProblem& problem, int samples, std::uint64_t seed) {
    const LinearizationCoeffs& cf = problem.coeffs;
    std::mt19937_64 rng(seed);
    InequalityReport rep;
    rep.samples = samples;
    rep.min_slack = kInf;
    for (int s = 0; s < samples; ++s) {
        const ScalarField u = random_trig_polynomial(cf.grid, cf.grid.n / 4, rng);
        ScalarField ku = u;
        for (std::size_t i = 0; i < ku.values.size(); ++i)
            ku.values[i] = cf.kappa[i] * u.values[i] * u.values[i];
        const double lhs = bilinear_B(cf, u, u);
        const double bound = 0.5 * norm_X_squared(cf, u) - 1.5 * integrate(ku);
        const double scale = std::fmax(1.0, std::fabs(lhs) + std::fabs(bound));
        rep.min_slack = std::fmin(rep.min_slack, (lhs - bound) / scale);
    }
    rep.pass = rep.min_slack >= -1e-9;
    return rep;
}

InequalityReport verify_boundedness(const LinearizationCoeffs& coeffs, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    InequalityReport rep;
    rep.samples = samples;
    rep.min_slack = kInf;
    for (int s = 0; s < samples; ++s) {
        const ScalarField u = random_trig_polynomial(coeffs.grid, coeffs.grid.n / 4, rng);
        const ScalarField v = random_trig_polynomial(coeffs.grid, coeffs.grid.n / 4, rng);
        const double lhs = std::fabs(bilinear_B(coeffs, u, v));
        const double rhs = (coeffs.tau + 3.0) * norm_X(coeffs, u) * norm_X(coeffs, v);
        const double scale = std::fmax(1.0, rhs);
        rep.min_slack = std::fmin(rep.min_slack, (rhs - lhs) / scale);
    }
    rep.pass = rep.min_slack >= -1e-9;
    return rep;
}

InequalityReport verify_embeddings(const ScalarField& sigma, const std::vector<double>& kappa,
                                   double q, double beta, int samples, std::uint64_t seed) {
    const TorusGrid& g = sigma.grid;
    if (!gate_appendix_qbeta(q, beta, g.dim)) throw std::invalid_argument("(q, beta) fails the Sobolev gate");
    ScalarField sig_pow = sigma;
    for (double& v : sig_pow.values) v = std::pow(v, q / (q - 1.0));
    const double sigma_integral = integrate(sig_pow);
    ScalarField kappa_f = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) kappa_f.values[i] = kappa[i];
    const double kappa_norm = lp_norm(kappa_f, beta);
    const double beta_conj = conjugate_exponent(beta);

    std::mt19937_64 rng(seed);
    InequalityReport rep;
    rep.samples = samples;
    rep.min_slack = kInf;
    for (int s = 0; s < samples; ++s) {
        const ScalarField v = random_trig_polynomial(g, g.n / 4, rng);
        // sigma-weighted estimate
        ScalarField v2q = v;
        for (double& x : v2q.values) x = std::pow(std::fabs(x), 2.0 * q);
        ScalarField sv2 = v;
        for (std::size_t i = 0; i < sv2.values.size(); ++i)
            sv2.values[i] = sigma.values[i] * v.values[i] * v.values[i];
        const double lhs1 = integrate(v2q);
        const double rhs1 = std::pow(sigma_integral, 1.0 - q) * std::pow(integrate(sv2), q);
        rep.min_slack = std::fmin(rep.min_slack, (rhs1 - lhs1) / std::fmax(1.0, rhs1));
        // kappa-weighted estimate
        ScalarField kv2 = v;
        for (std::size_t i = 0; i < kv2.values.size(); ++i)
            kv2.values[i] = kappa[i] * v.values[i] * v.values[i];
        const double lhs2 = integrate(kv2);
        const double rhs2 = kappa_norm * std::pow(lp_norm(v, 2.0 * beta_conj), 2.0);
        rep.min_slack = std::fmin(rep.min_slack, (rhs2 - lhs2) / std::fmax(1.0, rhs2));
    }
    rep.pass = rep.min_slack >= -1e-9;
    return rep;
}

bool check_coercivity_sufficient(const LinearizationCoeffs& coeffs, double epsilon, double theta) {
    if (!(epsilon > 0.5) || !(theta > 0.0)) throw std::invalid_argument("need epsilon > 1/2 and theta > 0");
    for (std::size_t i = 0; i < coeffs.grid.size(); ++i) {
        const double drift = coeffs.kappa[i] - std::fabs(coeffs.a[i]);  // c^T A^-1 c + b^T A^-1 b
        if (!(epsilon * drift + coeffs.a[i] <= -theta)) return false;
    }
    return true;
}

}  // namespace mfg
