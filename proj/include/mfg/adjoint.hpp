#pragma once

#include <Eigen/Dense>

#include "mfg/linearize.hpp"

namespace mfg {

struct AdjointProblem {
    LinearizationCoeffs coeffs;
    ScalarField zeta;
    double upsilon0 = 2.0;

    void validate() const;  // upsilon0 > 3/2, kappa > 0 everywhere
};

/// Weighted norm: sqrt of integral (Dv^T A Dv + kappa v^2).
double norm_X(const LinearizationCoeffs& coeffs, const ScalarField& v);
double norm_X_squared(const LinearizationCoeffs& coeffs, const ScalarField& v);

/// B[u,v] = integral (Dv^T A Du - v c^T Du + u b^T Dv - a u v).
double bilinear_B(const LinearizationCoeffs& coeffs, const ScalarField& u, const ScalarField& v);

/// Collocation/Galerkin matrix of L u = -div(A Du - c u) + b^T Du - a u,
/// differentiation done spectrally, quadrature by the rectangle rule.
Eigen::MatrixXd assemble_discrete_L(const AdjointProblem& problem);

/// Smallest singular value of L; the discrete kernel-triviality proxy.
double kernel_check(const Eigen::MatrixXd& L);

struct AdjointReport {
    double residual = 0.0;        // |L v - zeta|_inf
    double norm_X_solution = 0.0;
    double finiteness = 0.0;      // integral A_ij v_xi v_xj + kappa |v|^2
    double sigma_min_L = 0.0;     // smallest singular value of L
    bool kernel_suspected = false;
};

/// Direct solve of L v = zeta. Throws when the kernel check fails.
std::pair<ScalarField, AdjointReport> solve_adjoint(const AdjointProblem& problem);

/// The shifted Fredholm route: solves (I - upsilon0 K) v = L_{upsilon0}^{-1} zeta
/// with K = L_{upsilon0}^{-1} (kappa .); agrees with the direct solve.
ScalarField solve_adjoint_fredholm(const AdjointProblem& problem);

struct InequalityReport {
    int samples = 0;
    double min_slack = 0.0;  // worst (lhs-bound) gap, scaled
    bool pass = false;
};

/// Lemma-style coercive shift: B[u,u] >= 0.5 |u|_X^2 - 1.5 int kappa u^2
/// on random band-limited fields.
InequalityReport verify_coercive_shift(const AdjointProblem& problem, int samples, std::uint64_t seed = 7);

/// Operator bound |B[u,v]| <= (tau+3) |u|_X |v|_X on random pairs.
InequalityReport verify_boundedness(const LinearizationCoeffs& coeffs, int samples, std::uint64_t seed = 8);

/// Weighted-space embeddings: the sigma-weighted Holder estimate and the
/// kappa-weighted Holder estimate, on random band-limited fields.
InequalityReport verify_embeddings(const ScalarField& sigma, const std::vector<double>& kappa,
                                   double q, double beta, int samples, std::uint64_t seed = 9);

/// Pointwise sufficient condition for kernel triviality:
/// eps (c^T A^-1 c + b^T A^-1 b) + a <= -theta, eps > 1/2, theta > 0.
bool check_coercivity_sufficient(const LinearizationCoeffs& coeffs, double epsilon, double theta);

}  // namespace mfg
