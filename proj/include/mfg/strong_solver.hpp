#pragma once

#include <vector>

#include "mfg/mfg_core.hpp"

namespace mfg {

struct SolverOptions {
    std::vector<double> visc_schedule{1e-1, 1e-2, 1e-3, 1e-4};
    double newton_tol = 1e-10;
    int max_newton = 50;
    double damping_factor = 0.5;
    double min_step = 1.0 / (1 << 20);
    bool final_unregularized_stage = true;  // append a Newton stage at eps = 0
    double final_tol = 1e-12;

    void validate() const;
};

struct StageReport {
    double eps = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct SolveReport {
    double residual = 0.0;  // unregularized system, infinity norm
    double c0_hat = 0.0;    // min density over the grid
    std::vector<StageReport> stages;
    bool converged = false;
};

/// Residual of the viscosity-regularized system: adds eps*(-Lap u) to the
/// first equation and eps*(-Lap m) to the second. eps = 0 reduces exactly
/// to apply_operator.
FieldPair residual_with_viscosity(const HamiltonianSpec& spec, const FieldPair& w, double eps);

/// Directional derivative of residual_with_viscosity at w in direction dir.
FieldPair jacobian_apply(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir, double eps);

bool check_density_floor(const ScalarField& m, double c0_min);

/// Damped Newton with viscosity continuation; density kept positive by
/// solving in mu = log m.
std::pair<FieldPair, SolveReport> solve_strong(const HamiltonianSpec& spec, const TorusGrid& grid,
                                               const SolverOptions& opts = {});

}  // namespace mfg
