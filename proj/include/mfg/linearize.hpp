#pragma once

#include <optional>
#include <vector>

#include "mfg/mfg_core.hpp"

namespace mfg {

/// Pointwise coefficients of the scalar elliptic equation obtained by
/// eliminating the density difference from the linearized MFG system,
/// plus the derived ellipticity data.
struct LinearizationCoeffs {
    TorusGrid grid;
    std::vector<SmallMat> A;   // d x d per point
    std::vector<double> a;
    std::vector<SmallVec> b;
    std::vector<SmallVec> c;
    std::vector<double> kappa;  // c^T A^-1 c + b^T A^-1 b + |a|
    ScalarField sigma;          // pointwise min eigenvalue of A_S
    double tau = 0.0;           // max over grid of gen-eig of ((A^-1)_S)^-1 vs A_S
};

/// Constant-coefficient instance (mainly for the appendix solver tests).
LinearizationCoeffs constant_coeffs(const TorusGrid& g, const SmallMat& A, double a,
                                    const SmallVec& b, const SmallVec& c);

/// Assembles A, a, b, c, kappa, sigma, tau at the strong solution w.
/// Throws std::domain_error naming the grid point if |D_mH| < 1e-12.
LinearizationCoeffs assemble_coeffs(const HamiltonianSpec& spec, const FieldPair& w);

/// Independent kappa recomputation (linear solves, no stored inverse);
/// used as a cross-check oracle.
std::vector<double> recompute_kappa(const LinearizationCoeffs& coeffs);

struct A3monReport {
    ScalarField lambda_min;  // per-point smallest eigenvalue of the strict-monotonicity matrix
    double global_min = 0.0;
    bool pass = false;
};

/// Pointwise min eigenvalue of [[m DppH, m DpmH / 2], [m DpmH^T / 2, -DmH]].
A3monReport check_A3mon(const HamiltonianSpec& spec, const FieldPair& w, double tol_pos = 1e-10);

struct E1E3Report {
    ScalarField sigma;       // copy of coeffs.sigma
    double tau = 0.0;
    ScalarField e3_min_eig;  // min eigenvalue of the (d+1) block matrix of condition (e3)
    bool pass = false;
};

E1E3Report check_e1_e3(const HamiltonianSpec& spec, const FieldPair& w, const LinearizationCoeffs& coeffs,
                       double tol_pos = 1e-10);

struct ExponentWitness {
    double q = 0.5;
    double beta = kInf;
    double sigma_integral = 0.0;  // integral of sigma^{q/(q-1)}
    double kappa_norm = 0.0;      // L^beta norm of kappa
};

/// Grid search over q in {0.5,...,0.95} and beta in {1,1.5,2,4,8,inf};
/// returns the admissible pair maximizing beta, or nullopt.
std::optional<ExponentWitness> search_exponent_witness(const LinearizationCoeffs& coeffs, int d);

/// The quadratic form of the strict-monotonicity identity:
/// integral of (-DmH eta^2 + Dv^T m DppH Dv + m DpmH . Dv eta).
double quadratic_form_Q(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir);

/// The linearized MFG system applied to dir = (eta, v).
FieldPair linearized_operator(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir);

/// Residual of the eliminated scalar elliptic equation:
/// -div(A Dv + b v) - a v - c . Dv.
ScalarField eliminated_elliptic_residual(const LinearizationCoeffs& coeffs, const ScalarField& vbar);

}  // namespace mfg
