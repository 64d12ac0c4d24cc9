#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

#include "mfg/adjoint.hpp"
#include "mfg/config.hpp"
#include "mfg/linearize.hpp"
#include "mfg/strong_solver.hpp"

namespace mfg {

struct GateVerdicts {
    bool a4 = false;
    bool a3 = false;
    bool intA_pass = false;
    std::string intA_failure;
    HolderExponents intA_q;
    bool growth_pass = false;
    double required_gamma1 = 0.0;
    double required_r1 = 0.0;
    double g_prime_min = 0.0;
    bool qbeta_pass = false;
    double witness_q = 0.0;
    double witness_beta = 0.0;
};

struct PathAResult {
    double lambda_min = 0.0;
    double q_margin = 0.0;  // worst scaled slack of Q(dir) vs lambda_min * energy
    bool verdict = false;
};

struct PathBResult {
    double sigma_min = 0.0;
    double tau = 0.0;
    double e3_min_eig = 0.0;
    double sigma_integral = 0.0;     // integral sigma^{q/(q-1)} for the witness q
    double kappa_norm_beta = 0.0;    // L^beta norm for the witness beta
    double A_norm = 0.0;             // discrete L^{(gamma/2)'} norm of |A|_F
    double kappa_norm_sobolev = 0.0; // discrete L^{(gamma*/2)'} norm of kappa
    std::vector<double> adjoint_residuals;  // per sampled zeta, scaled by |zeta|_inf
    double kernel_sigma_min = 0.0;
    bool coercivity_sufficient = false;
    bool verdict = false;
    std::string disabled_reason;  // non-empty when the path-(b) reduction is inapplicable
};

struct ViProbeResult {
    int samples = 0;
    double min_lhs = 0.0;  // scaled by field norms
};

struct Certificate {
    GateVerdicts gates;
    double c0_hat = 0.0;
    bool density_floor_ok = false;
    PathAResult path_a;
    PathBResult path_b;
    ViProbeResult vi;
    bool pass_a = false;
    bool pass_b = false;
    std::vector<std::string> caveats;
    double solver_residual = 0.0;
    bool solver_converged = false;
};

/// Runs the full hypothesis-check pipeline on a freshly computed strong
/// solution and returns the certificate together with the solution.
Certificate certify(const RunConfig& cfg, FieldPair* solution_out = nullptr,
                    LinearizationCoeffs* coeffs_out = nullptr);

/// Minimum of vi_lhs over n_tests sampled test pairs, scaled by field norms.
ViProbeResult vi_probe(const HamiltonianSpec& spec, const FieldPair& strong, int n_tests, std::uint64_t seed,
                       int max_freq, double positivity_floor = 0.1);

struct SeparationRow {
    double delta = 0.0;
    double q_over_delta_sq = 0.0;
};

/// Q(delta * dir) / delta^2 across scales; constant for a quadratic form.
std::vector<SeparationRow> perturbation_separation(const HamiltonianSpec& spec, const FieldPair& strong,
                                                   const std::vector<double>& delta_scales,
                                                   std::uint64_t seed = 11);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);
std::string certificate_summary(const Certificate& cert);

/// Writes certificate.json, certificate.txt and the field CSVs into dir.
void emit_reports(const Certificate& cert, const FieldPair& solution, const LinearizationCoeffs& coeffs,
                  const std::string& dir);

}  // namespace mfg
