#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>

#include "mfg/exponents.hpp"
#include "mfg/hamiltonian.hpp"
#include "mfg/strong_solver.hpp"

namespace mfg {

struct CertifyOptions {
    int n_tests = 200;        // VI probe sample count
    std::uint64_t seed = 1234;
    double tol_pos = 1e-10;   // strict-positivity tolerance
    double vi_tol = 1e-9;     // scaled VI nonnegativity tolerance
    double c0_min = 1e-6;     // density floor to certify against
    int n_zeta = 8;           // Fourier modes sampled for the adjoint solve
    int q_samples = 20;       // directions for the Q-coercivity probe
};

/// One JSON document with sections {grid, hamiltonian, exponents, solver, certify}.
struct RunConfig {
    int grid_d = 1;
    int grid_n = 64;
    HamiltonianSpec hamiltonian;
    ExponentProfile exponents{4.0, 4.0, 8.0, 8.0, 1};
    SolverOptions solver;
    CertifyOptions certify;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace mfg
