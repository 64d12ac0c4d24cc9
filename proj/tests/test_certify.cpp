#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>

#include "mfg/certify.hpp"

using namespace mfg;

namespace {

RunConfig small_congestion_config() {
    RunConfig cfg;
    cfg.grid_d = 1;
    cfg.grid_n = 32;
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = 0.2;
    cfg.hamiltonian = make_congestion_spec(2.0, 0.5, {mode});
    cfg.certify.n_tests = 20;
    cfg.certify.q_samples = 5;
    cfg.certify.n_zeta = 3;
    return cfg;
}

RunConfig small_power_config() {
    RunConfig cfg;
    cfg.grid_d = 1;
    cfg.grid_n = 32;
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = 0.2;
    cfg.hamiltonian = make_power_spec(2.0, CouplingG{}, {mode});
    cfg.certify.n_tests = 20;
    cfg.certify.q_samples = 5;
    cfg.certify.n_zeta = 3;
    return cfg;
}

}  // namespace

TEST_CASE("certificate round trips through json") {
    const Certificate cert = certify(small_power_config());
    const nlohmann::json j = certificate_to_json(cert);
    const Certificate back = certificate_from_json(j);
    CHECK(certificate_to_json(back) == j);
}

TEST_CASE("certification is deterministic") {
    const RunConfig cfg = small_congestion_config();
    const nlohmann::json a = certificate_to_json(certify(cfg));
    const nlohmann::json b = certificate_to_json(certify(cfg));
    CHECK(a == b);
}

TEST_CASE("power run passes both certification routes") {
    const Certificate cert = certify(small_power_config());
    CHECK(cert.solver_converged);
    CHECK(cert.gates.a4);
    CHECK(cert.gates.a3);
    CHECK(cert.gates.intA_pass);
    CHECK(cert.density_floor_ok);
    CHECK(cert.pass_a);
    CHECK(cert.path_a.lambda_min > 0.0);
    CHECK(cert.vi.min_lhs >= -1e-9);
    CHECK_FALSE(cert.caveats.empty());
}

TEST_CASE("congestion run below the exponent threshold passes the direct route") {
    const Certificate cert = certify(small_congestion_config());
    CHECK(cert.solver_converged);
    CHECK(cert.pass_a);
    CHECK(cert.path_b.sigma_min > 0.0);
    CHECK_FALSE(cert.caveats.empty());
}

TEST_CASE("congestion exponent above the threshold is flagged") {
    RunConfig cfg = small_congestion_config();
    cfg.hamiltonian = make_congestion_spec(1.2, 1.0);  // alpha above the admissible range
    const Certificate cert = certify(cfg);
    bool flagged = false;
    for (const auto& cvt : cert.caveats)
        flagged = flagged || cvt.find("alpha") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("vi probe accepts the strong solution and rejects a perturbed one") {
    const RunConfig cfg = small_power_config();
    FieldPair w;
    LinearizationCoeffs coeffs;
    const Certificate cert = certify(cfg, &w, &coeffs);
    REQUIRE(cert.solver_converged);

    const ViProbeResult ok = vi_probe(cfg.hamiltonian, w, 100, 5, cfg.grid_n / 4);
    CHECK(ok.min_lhs >= -1e-9);

    FieldPair bad = w;
    for (std::size_t i = 0; i < w.u.values.size(); ++i)
        bad.u.values[i] += 0.3 * std::cos(2.0 * M_PI * w.u.grid.coord(i, 0));
    // a test pair moving against the operator value exposes the violation
    const FieldPair Abad = apply_operator(cfg.hamiltonian, bad);
    double rejected = vi_probe(cfg.hamiltonian, bad, 200, 5, cfg.grid_n / 4).min_lhs;
    for (double delta : {0.01, 0.05, 0.1}) {
        const FieldPair probe = bad - delta * Abad;
        if (probe.m.min() > 1e-6)
            rejected = std::min(rejected, vi_lhs(cfg.hamiltonian, probe, bad));
    }
    CHECK(rejected < -1e-3);
}

TEST_CASE("perturbation response scales quadratically") {
    const RunConfig cfg = small_power_config();
    FieldPair w;
    LinearizationCoeffs coeffs;
    const Certificate cert = certify(cfg, &w, &coeffs);
    REQUIRE(cert.solver_converged);
    const auto rows = perturbation_separation(cfg.hamiltonian, w, {1e-3, 1e-2, 1e-1});
    REQUIRE(rows.size() == 3);
    const double ref = rows[0].q_over_delta_sq;
    CHECK(ref > 0.0);
    for (const auto& row : rows) CHECK(std::fabs(row.q_over_delta_sq / ref - 1.0) <= 0.05);
}

TEST_CASE("text summary names the verdicts") {
    const Certificate cert = certify(small_power_config());
    const std::string text = certificate_summary(cert);
    CHECK(text.find("pass") != std::string::npos);
    CHECK(text.find("caveat") != std::string::npos);
}
