#include "mfg/certify.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double lp_norm_values(const TorusGrid& g, const std::vector<double>& vals, double p) {
    ScalarField f = ScalarField::zeros(g);
    f.values = vals;
    if (std::isinf(p)) return f.max_abs();
    for (double& v : f.values) v = std::pow(std::fabs(v), p);
    return std::pow(integrate(f), 1.0 / p);
}

std::vector<ScalarField> zeta_samples(const TorusGrid& g, int n_modes, std::uint64_t seed) {
    std::vector<ScalarField> out;
    for (int k = 1; k <= n_modes / 2; ++k) {
        out.push_back(ScalarField::sample(
            g, [&](const std::array<double, 2>& x) { return std::cos(kTwoPi * k * x[0]); }));
        out.push_back(ScalarField::sample(
            g, [&](const std::array<double, 2>& x) { return std::sin(kTwoPi * k * x[0]); }));
    }
    std::mt19937_64 rng(seed);
    out.push_back(random_trig_polynomial(g, g.n / 4, rng));
    return out;
}

}  // namespace

ViProbeResult vi_probe(const HamiltonianSpec& spec, const FieldPair& strong, int n_tests, std::uint64_t seed,
                       int max_freq, double positivity_floor) {
    ViProbeResult out;
    out.samples = n_tests;
    out.min_lhs = kInf;
    const double scale = std::fmax(1.0, strong.m.max_abs() + strong.u.max_abs());
    for (int t = 0; t < n_tests; ++t) {
        const FieldPair test = random_test_pair(strong.m.grid, max_freq, positivity_floor, seed + t);
        out.min_lhs = std::fmin(out.min_lhs, vi_lhs(spec, test, strong) / scale);
    }
    if (n_tests == 0) out.min_lhs = 0.0;
    return out;
}

std::vector<SeparationRow> perturbation_separation(const HamiltonianSpec& spec, const FieldPair& strong,
                                                   const std::vector<double>& delta_scales,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FieldPair dir = FieldPair::zeros(strong.m.grid);
    dir.m = random_trig_polynomial(strong.m.grid, strong.m.grid.n / 4, rng);
    dir.u = random_trig_polynomial(strong.m.grid, strong.m.grid.n / 4, rng);
    std::vector<SeparationRow> rows;
    for (double delta : delta_scales) {
        SeparationRow row;
        row.delta = delta;
        row.q_over_delta_sq = delta == 0.0 ? 0.0 : quadratic_form_Q(spec, strong, delta * dir) / (delta * delta);
        rows.push_back(row);
    }
    return rows;
}

Certificate certify(const RunConfig& cfg, FieldPair* solution_out, LinearizationCoeffs* coeffs_out) {
    Certificate cert;
    const TorusGrid grid = make_grid(cfg.grid_d, cfg.grid_n);
    const HamiltonianSpec& spec = cfg.hamiltonian;

    auto [w, solve_rep] = solve_strong(spec, grid, cfg.solver);
    cert.solver_residual = solve_rep.residual;
    cert.solver_converged = solve_rep.converged;
    if (!solve_rep.converged)
        throw std::runtime_error("strong solver did not converge (residual " +
                                 std::to_string(solve_rep.residual) + ")");
    cert.c0_hat = solve_rep.c0_hat;
    cert.density_floor_ok = check_density_floor(w.m, cfg.certify.c0_min);

    // Exponent gates.
    ExponentProfile prof = cfg.exponents;
    prof.d = cfg.grid_d;
    prof.validate();
    cert.gates.a4 = gate_a4(prof);
    cert.gates.a3 = gate_a3(prof);
    const IntAGate intA = gate_intA(prof);
    cert.gates.intA_pass = intA.pass;
    cert.gates.intA_failure = intA.failure;
    cert.gates.intA_q = intA.q;
    const GrowthReport growth = check_growth(spec, prof);
    cert.gates.growth_pass = growth.pass();
    cert.gates.required_gamma1 = growth.required_gamma1;
    cert.gates.required_r1 = growth.required_r1;
    cert.gates.g_prime_min = growth.g_prime_min;

    if (spec.family == HamiltonianFamily::congestion && spec.alpha > congestion_alpha_max(spec.gamma)) {
        std::ostringstream oss;
        oss << "congestion exponent alpha = " << spec.alpha << " exceeds the feasibility threshold "
            << congestion_alpha_max(spec.gamma) << "; conditions (e1)/(e3) are not guaranteed";
        cert.caveats.push_back(oss.str());
    }

    // Linearization; failure of the D_mH cutoff disables path (b) only.
    LinearizationCoeffs coeffs;
    bool have_coeffs = true;
    try {
        coeffs = assemble_coeffs(spec, w);
    } catch (const std::domain_error& e) {
        have_coeffs = false;
        cert.path_b.disabled_reason = e.what();
    }

    // Path (a): strict monotonicity plus the Q-coercivity probe.
    const A3monReport a3mon = check_A3mon(spec, w, cfg.certify.tol_pos);
    cert.path_a.lambda_min = a3mon.global_min;
    {
        std::mt19937_64 rng(cfg.certify.seed + 101);
        double margin = kInf;
        for (int s = 0; s < cfg.certify.q_samples; ++s) {
            FieldPair dir = FieldPair::zeros(grid);
            dir.m = random_trig_polynomial(grid, grid.n / 4, rng);
            dir.u = random_trig_polynomial(grid, grid.n / 4, rng);
            const double q = quadratic_form_Q(spec, w, dir);
            const VectorField Dv = gradient(dir.u);
            ScalarField energy = hadamard(dir.m, dir.m);
            for (int a = 0; a < grid.dim; ++a) energy += hadamard(Dv.comps[a], Dv.comps[a]);
            const double bound = a3mon.global_min * integrate(energy);
            margin = std::fmin(margin, (q - bound) / std::fmax(1.0, std::fabs(q) + std::fabs(bound)));
        }
        cert.path_a.q_margin = margin;
    }
    cert.path_a.verdict = a3mon.pass && cert.path_a.q_margin >= -cfg.certify.vi_tol;
    cert.pass_a = cert.gates.a4 && cert.gates.a3 && cert.gates.growth_pass && cert.density_floor_ok &&
                  cert.gates.intA_pass && cert.path_a.verdict;

    // Path (b): ellipticity, exponent witness, integrability norms, adjoint solves.
    if (have_coeffs) {
        const E1E3Report e1e3 = check_e1_e3(spec, w, coeffs, cfg.certify.tol_pos);
        cert.path_b.sigma_min = e1e3.sigma.min();
        cert.path_b.tau = e1e3.tau;
        cert.path_b.e3_min_eig = e1e3.e3_min_eig.min();
        const auto witness = search_exponent_witness(coeffs, grid.dim);
        if (witness) {
            cert.gates.qbeta_pass = true;
            cert.gates.witness_q = witness->q;
            cert.gates.witness_beta = witness->beta;
            cert.path_b.sigma_integral = witness->sigma_integral;
            cert.path_b.kappa_norm_beta = witness->kappa_norm;
        }
        {
            std::vector<double> afro(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) afro[i] = Eigen::MatrixXd(coeffs.A[i]).norm();
            cert.path_b.A_norm = lp_norm_values(grid, afro, conjugate_exponent(std::fmax(1.0, spec.gamma / 2.0)));
            const double half_star = prof.gamma_star() / 2.0;
            const double kappa_exp = half_star <= 1.0 ? kInf : conjugate_exponent(half_star);
            cert.path_b.kappa_norm_sobolev = lp_norm_values(grid, coeffs.kappa, kappa_exp);
        }
        bool adjoint_ok = e1e3.pass;
        if (e1e3.pass && witness) {
            AdjointProblem problem;
            problem.coeffs = coeffs;
            problem.upsilon0 = 2.0;
            // eq-weak-form adjoint uses A transposed; our families have symmetric A,
            // transpose anyway for generality
            for (auto& Ai : problem.coeffs.A) Ai = SmallMat(Ai.transpose());
            double kernel_min = kInf;
            for (const ScalarField& zeta : zeta_samples(grid, cfg.certify.n_zeta, cfg.certify.seed + 202)) {
                problem.zeta = zeta;
                try {
                    auto [vbar, rep] = solve_adjoint(problem);
                    cert.path_b.adjoint_residuals.push_back(rep.residual / std::fmax(1e-30, zeta.max_abs()));
                    kernel_min = std::fmin(kernel_min, rep.sigma_min_L);
                    if (rep.residual > 1e-9 * zeta.max_abs()) adjoint_ok = false;
                } catch (const std::runtime_error&) {
                    adjoint_ok = false;
                    kernel_min = 0.0;
                    break;
                }
            }
            cert.path_b.kernel_sigma_min = std::isinf(kernel_min) ? 0.0 : kernel_min;
            cert.path_b.coercivity_sufficient = check_coercivity_sufficient(coeffs, 1.0, cfg.certify.tol_pos);
        } else {
            adjoint_ok = false;
        }
        cert.path_b.verdict = adjoint_ok && witness.has_value();
        cert.pass_b = cert.gates.a4 && cert.gates.a3 && cert.gates.growth_pass && cert.density_floor_ok &&
                      cert.path_b.verdict;
    }

    cert.vi = vi_probe(spec, w, cfg.certify.n_tests, cfg.certify.seed, std::max(1, grid.n / 8));
    if (cert.vi.min_lhs < -cfg.certify.vi_tol) {
        cert.pass_a = false;
        cert.pass_b = false;
        cert.caveats.push_back("VI probe found a negative value; the computed solution fails the sampled weak test");
    }
    if (cfg.certify.n_tests == 0)
        cert.caveats.push_back("VI probe ran with zero samples; weak-test evidence is vacuous");

    // Standing caveats: what a finite grid cannot certify.
    cert.caveats.push_back("integrability norms (conditions on A and kappa) are discrete evidence only");
    cert.caveats.push_back("sigma^{q/(q-1)} integral is discrete evidence only (finite on any grid)");
    if (!cert.path_b.coercivity_sufficient)
        cert.caveats.push_back("kernel triviality rests on the discrete smallest singular value: discrete evidence only");
    cert.caveats.push_back(
        "the variational inequality is sampled, not quantified over all smooth test pairs");
    cert.caveats.push_back(
        "classical regularity of the computed solution is grid-smoothness evidence only");

    if (solution_out) *solution_out = w;
    if (coeffs_out && have_coeffs) *coeffs_out = coeffs;
    return cert;
}

nlohmann::json certificate_to_json(const Certificate& cert) {
    nlohmann::json j;
    j["exponent_gates"] = {
        {"a4", cert.gates.a4},
        {"a3", cert.gates.a3},
        {"intA", {{"pass", cert.gates.intA_pass},
                  {"failure", cert.gates.intA_failure},
                  {"q1", cert.gates.intA_q.q1},
                  {"q2", cert.gates.intA_q.q2},
                  {"q3", cert.gates.intA_q.q3},
                  {"q4", cert.gates.intA_q.q4}}},
        {"growth", {{"pass", cert.gates.growth_pass},
                    {"required_gamma1", cert.gates.required_gamma1},
                    {"required_r1", cert.gates.required_r1},
                    {"g_prime_min", cert.gates.g_prime_min}}},
        {"appendix_qbeta", {{"pass", cert.gates.qbeta_pass},
                            {"q", cert.gates.witness_q},
                            {"beta", cert.gates.witness_beta}}}};
    j["density_floor"] = {{"c0_hat", cert.c0_hat}, {"ok", cert.density_floor_ok}};
    j["path_a"] = {{"A3mon_lambda_min", cert.path_a.lambda_min},
                   {"Q_coercivity_margin", cert.path_a.q_margin},
                   {"verdict", cert.path_a.verdict}};
    j["path_b"] = {{"e1_sigma_min", cert.path_b.sigma_min},
                   {"tau", cert.path_b.tau},
                   {"e3_min_eig", cert.path_b.e3_min_eig},
                   {"kappa_norms", {{"beta_witness", cert.path_b.kappa_norm_beta},
                                    {"sobolev", cert.path_b.kappa_norm_sobolev},
                                    {"sigma_integral", cert.path_b.sigma_integral}}},
                   {"A_norm", cert.path_b.A_norm},
                   {"adjoint_residuals", cert.path_b.adjoint_residuals},
                   {"kernel_sigma_min", cert.path_b.kernel_sigma_min},
                   {"coercivity_sufficient", cert.path_b.coercivity_sufficient},
                   {"verdict", cert.path_b.verdict},
                   {"disabled_reason", cert.path_b.disabled_reason}};
    j["vi_probe"] = {{"samples", cert.vi.samples}, {"min_lhs", cert.vi.min_lhs}};
    j["overall"] = {{"pass_a", cert.pass_a}, {"pass_b", cert.pass_b}, {"caveats", cert.caveats}};
    j["solver"] = {{"residual", cert.solver_residual}, {"converged", cert.solver_converged}};
    return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate c;
    const auto& g = j.at("exponent_gates");
    c.gates.a4 = g.at("a4");
    c.gates.a3 = g.at("a3");
    c.gates.intA_pass = g.at("intA").at("pass");
    c.gates.intA_failure = g.at("intA").at("failure");
    c.gates.intA_q = {g.at("intA").at("q1"), g.at("intA").at("q2"), g.at("intA").at("q3"),
                      g.at("intA").at("q4")};
    c.gates.growth_pass = g.at("growth").at("pass");
    c.gates.required_gamma1 = g.at("growth").at("required_gamma1");
    c.gates.required_r1 = g.at("growth").at("required_r1");
    c.gates.g_prime_min = g.at("growth").at("g_prime_min");
    c.gates.qbeta_pass = g.at("appendix_qbeta").at("pass");
    c.gates.witness_q = g.at("appendix_qbeta").at("q");
    c.gates.witness_beta = g.at("appendix_qbeta").at("beta");
    c.c0_hat = j.at("density_floor").at("c0_hat");
    c.density_floor_ok = j.at("density_floor").at("ok");
    c.path_a.lambda_min = j.at("path_a").at("A3mon_lambda_min");
    c.path_a.q_margin = j.at("path_a").at("Q_coercivity_margin");
    c.path_a.verdict = j.at("path_a").at("verdict");
    const auto& b = j.at("path_b");
    c.path_b.sigma_min = b.at("e1_sigma_min");
    c.path_b.tau = b.at("tau");
    c.path_b.e3_min_eig = b.at("e3_min_eig");
    c.path_b.kappa_norm_beta = b.at("kappa_norms").at("beta_witness");
    c.path_b.kappa_norm_sobolev = b.at("kappa_norms").at("sobolev");
    c.path_b.sigma_integral = b.at("kappa_norms").at("sigma_integral");
    c.path_b.A_norm = b.at("A_norm");
    c.path_b.adjoint_residuals = b.at("adjoint_residuals").get<std::vector<double>>();
    c.path_b.kernel_sigma_min = b.at("kernel_sigma_min");
    c.path_b.coercivity_sufficient = b.at("coercivity_sufficient");
    c.path_b.verdict = b.at("verdict");
    c.path_b.disabled_reason = b.at("disabled_reason");
    c.vi.samples = j.at("vi_probe").at("samples");
    c.vi.min_lhs = j.at("vi_probe").at("min_lhs");
    c.pass_a = j.at("overall").at("pass_a");
    c.pass_b = j.at("overall").at("pass_b");
    c.caveats = j.at("overall").at("caveats").get<std::vector<std::string>>();
    c.solver_residual = j.at("solver").at("residual");
    c.solver_converged = j.at("solver").at("converged");
    return c;
}

std::string certificate_summary(const Certificate& cert) {
    std::ostringstream os;
    os.precision(12);
    os << "uniqueness certificate\n"
       << "======================\n"
       << "solver: residual " << cert.solver_residual << ", converged " << (cert.solver_converged ? "yes" : "no")
       << "\n"
       << "density floor: c0_hat " << cert.c0_hat << (cert.density_floor_ok ? " (ok)" : " (FAIL)") << "\n"
       << "gates: a4 " << cert.gates.a4 << ", a3 " << cert.gates.a3 << ", intA " << cert.gates.intA_pass
       << ", growth " << cert.gates.growth_pass << ", qbeta " << cert.gates.qbeta_pass << "\n"
       << "path (a): lambda_min " << cert.path_a.lambda_min << ", Q margin " << cert.path_a.q_margin
       << " -> " << (cert.path_a.verdict ? "pass" : "fail") << "\n"
       << "path (b): sigma_min " << cert.path_b.sigma_min << ", tau " << cert.path_b.tau << ", e3 min "
       << cert.path_b.e3_min_eig << ", kernel sigma_min " << cert.path_b.kernel_sigma_min << " -> "
       << (cert.path_b.verdict ? "pass" : "fail");
    if (!cert.path_b.disabled_reason.empty()) os << " (disabled: " << cert.path_b.disabled_reason << ")";
    os << "\n"
       << "vi probe: " << cert.vi.samples << " samples, min " << cert.vi.min_lhs << "\n"
       << "overall: pass_a " << (cert.pass_a ? "true" : "false") << ", pass_b "
       << (cert.pass_b ? "true" : "false") << "\n"
       << "caveats:\n";
    for (const auto& cv : cert.caveats) os << "  - " << cv << "\n";
    return os.str();
}

void emit_reports(const Certificate& cert, const FieldPair& solution, const LinearizationCoeffs& coeffs,
                  const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "certificate.json");
        out << certificate_to_json(cert).dump(2) << "\n";
    }
    {
        std::ofstream out(fs::path(dir) / "certificate.txt");
        out << certificate_summary(cert);
    }
    {
        std::ofstream out(fs::path(dir) / "m.csv");
        write_csv(out, solution.m);
    }
    {
        std::ofstream out(fs::path(dir) / "u.csv");
        write_csv(out, solution.u);
    }
    if (!coeffs.kappa.empty()) {
        ScalarField kappa = ScalarField::zeros(coeffs.grid);
        kappa.values = coeffs.kappa;
        std::ofstream ks(fs::path(dir) / "kappa.csv");
        write_csv(ks, kappa);
        std::ofstream ss(fs::path(dir) / "sigma.csv");
        write_csv(ss, coeffs.sigma);
    }
}

}  // namespace mfg
