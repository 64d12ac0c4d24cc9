#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mfg/adjoint.hpp"
#include "mfg/certify.hpp"
#include "mfg/config.hpp"
#include "mfg/linearize.hpp"
#include "mfg/strong_solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_field(const fs::path& path, const mfg::ScalarField& f) {
    std::ofstream out(path);
    mfg::write_csv(out, f);
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
    const mfg::RunConfig cfg = mfg::load_config(config_path);
    const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
    auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
    fs::create_directories(out_dir);
    write_field(fs::path(out_dir) / "m.csv", w.m);
    write_field(fs::path(out_dir) / "u.csv", w.u);
    json j;
    j["residual"] = rep.residual;
    j["c0_hat"] = rep.c0_hat;
    j["converged"] = rep.converged;
    j["stages"] = json::array();
    for (const auto& s : rep.stages)
        j["stages"].push_back({{"eps", s.eps}, {"iterations", s.iterations}, {"residual", s.residual}});
    std::ofstream(fs::path(out_dir) / "report.json") << j.dump(2) << "\n";
    std::cout << "residual " << rep.residual << ", c0_hat " << rep.c0_hat << "\n";
    return rep.converged ? 0 : 2;
}

int cmd_linearize(const std::string& config_path, const std::string& out_dir) {
    const mfg::RunConfig cfg = mfg::load_config(config_path);
    const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
    auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
    if (!rep.converged) {
        std::cerr << "solver did not converge\n";
        return 1;
    }
    const mfg::LinearizationCoeffs coeffs = mfg::assemble_coeffs(cfg.hamiltonian, w);
    const mfg::A3monReport a3 = mfg::check_A3mon(cfg.hamiltonian, w);
    const mfg::E1E3Report e = mfg::check_e1_e3(cfg.hamiltonian, w, coeffs);
    const auto witness = mfg::search_exponent_witness(coeffs, grid.dim);

    fs::create_directories(out_dir);
    mfg::ScalarField kappa = mfg::ScalarField::zeros(grid);
    kappa.values = coeffs.kappa;
    mfg::ScalarField afield = mfg::ScalarField::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) afield.values[i] = coeffs.a[i];
    write_field(fs::path(out_dir) / "kappa.csv", kappa);
    write_field(fs::path(out_dir) / "a.csv", afield);
    write_field(fs::path(out_dir) / "sigma.csv", coeffs.sigma);
    write_field(fs::path(out_dir) / "lambda_min.csv", a3.lambda_min);
    write_field(fs::path(out_dir) / "e3_min_eig.csv", e.e3_min_eig);

    json j;
    j["lambda_min"] = a3.global_min;
    j["sigma_min"] = e.sigma.min();
    j["tau"] = e.tau;
    j["e3_min"] = e.e3_min_eig.min();
    if (witness) j["witness"] = {{"q", witness->q}, {"beta", witness->beta}};
    std::ofstream(fs::path(out_dir) / "summary.json") << j.dump(2) << "\n";
    std::cout << "lambda_min " << a3.global_min << ", sigma_min " << e.sigma.min() << ", tau " << e.tau
              << "\n";
    return 0;
}

int cmd_adjoint(const std::string& config_path, const std::string& zeta_path, const std::string& out_dir) {
    const mfg::RunConfig cfg = mfg::load_config(config_path);
    const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
    auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
    if (!rep.converged) {
        std::cerr << "solver did not converge\n";
        return 1;
    }
    mfg::AdjointProblem problem;
    problem.coeffs = mfg::assemble_coeffs(cfg.hamiltonian, w);
    for (auto& Ai : problem.coeffs.A) Ai = mfg::SmallMat(Ai.transpose());
    std::ifstream zin(zeta_path);
    if (!zin) {
        std::cerr << "cannot open zeta file " << zeta_path << "\n";
        return 1;
    }
    problem.zeta = mfg::read_csv(zin, grid);

    auto [vbar, arep] = mfg::solve_adjoint(problem);
    const mfg::InequalityReport shift = mfg::verify_coercive_shift(problem, 100);
    const mfg::InequalityReport bound = mfg::verify_boundedness(problem.coeffs, 100);

    fs::create_directories(out_dir);
    write_field(fs::path(out_dir) / "vbar.csv", vbar);
    json j;
    j["residual"] = arep.residual;
    j["norm_X"] = arep.norm_X_solution;
    j["sigma_min"] = arep.sigma_min_L;
    j["lemmas"] = {{"coercive_shift", shift.pass}, {"boundedness", bound.pass}};
    std::ofstream(fs::path(out_dir) / "adjoint_report.json") << j.dump(2) << "\n";
    std::cout << "residual " << arep.residual << ", norm_X " << arep.norm_X_solution << "\n";
    return 0;
}

int cmd_certify(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
                bool seed_set) {
    mfg::RunConfig cfg = mfg::load_config(config_path);
    if (seed_set) cfg.certify.seed = seed;
    mfg::FieldPair solution;
    mfg::LinearizationCoeffs coeffs;
    const mfg::Certificate cert = mfg::certify(cfg, &solution, &coeffs);
    mfg::emit_reports(cert, solution, coeffs, out_dir);
    std::cout << mfg::certificate_summary(cert);
    return (cert.pass_a || cert.pass_b) ? 0 : 2;
}

int cmd_check_exponents(const mfg::ExponentProfile& prof, double q, double beta, bool have_qbeta) {
    prof.validate();
    const bool a4 = mfg::gate_a4(prof);
    const bool a3 = mfg::gate_a3(prof);
    const mfg::IntAGate intA = mfg::gate_intA(prof);
    bool all = a4 && a3 && intA.pass;
    std::cout << "gate      verdict\n";
    std::cout << "a4        " << (a4 ? "pass" : "FAIL") << "\n";
    std::cout << "a3        " << (a3 ? "pass" : "FAIL") << "\n";
    std::cout << "intA      " << (intA.pass ? "pass" : ("FAIL (" + intA.failure + ")")) << "\n";
    if (intA.pass)
        std::cout << "          q1=" << intA.q.q1 << " q2=" << intA.q.q2 << " q3=" << intA.q.q3
                  << " q4=" << intA.q.q4 << "\n";
    if (have_qbeta) {
        const bool qb = mfg::gate_appendix_qbeta(q, beta, prof.d);
        std::cout << "qbeta     " << (qb ? "pass" : "FAIL") << "\n";
        all = all && qb;
    }
    return all ? 0 : 2;
}

int cmd_probe(const std::string& config_path, int samples, std::uint64_t seed, double mmin, double mmax) {
    const mfg::RunConfig cfg = mfg::load_config(config_path);
    const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(mmin, mmax);
    std::cout << "sample,gap\n";
    double worst = mfg::kInf;
    for (int s = 0; s < samples; ++s) {
        auto draw = [&]() {
            mfg::FieldPair w = mfg::FieldPair::zeros(grid);
            w.u = mfg::random_trig_polynomial(grid, grid.n / 4, rng);
            const mfg::ScalarField base = mfg::random_trig_polynomial(grid, grid.n / 4, rng);
            const double lo = shift(rng);
            w.m = mfg::ScalarField::constant(grid, lo);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                w.m.values[i] += base.values[i] * base.values[i];
                w.m.values[i] = std::min(w.m.values[i], mmax);
            }
            return w;
        };
        const double gap = mfg::monotonicity_gap(cfg.hamiltonian, draw(), draw());
        worst = std::fmin(worst, gap);
        std::cout << s << ',' << gap << "\n";
    }
    std::cerr << "min gap " << worst << "\n";
    return worst >= -1e-8 ? 0 : 2;
}

int cmd_selftest() {
    // quick invariant pass over the analytic fixed points
    const mfg::TorusGrid grid = mfg::make_grid(1, 64);
    mfg::CouplingG id;
    id.kind = mfg::CouplingG::Kind::power_law;
    const mfg::HamiltonianSpec power = mfg::make_power_spec(2.0, id);
    auto [w, rep] = mfg::solve_strong(power, grid);
    bool ok = rep.converged && rep.residual <= 1e-12;
    const mfg::LinearizationCoeffs coeffs = mfg::assemble_coeffs(power, w);
    for (std::size_t i = 0; i < grid.size() && ok; ++i)
        ok = std::fabs(coeffs.kappa[i] - 1.0) < 1e-10 && std::fabs(coeffs.a[i] + 1.0) < 1e-10;
    std::cout << (ok ? "selftest pass\n" : "selftest FAIL\n");
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stationary MFG solver and weak-strong uniqueness certifier"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", zeta_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub, bool need_config = true) {
        if (need_config) sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the probe seed")->each([&](const std::string&) { seed_set = true; });
    };

    auto* solve = app.add_subcommand("solve", "compute a strong solution");
    add_common(solve);
    auto* lin = app.add_subcommand("linearize", "assemble and dump the linearization coefficients");
    add_common(lin);
    auto* adj = app.add_subcommand("adjoint", "solve the adjoint weighted elliptic equation");
    add_common(adj);
    adj->add_option("--zeta", zeta_path, "right-hand side field (CSV)")->required();
    auto* cert = app.add_subcommand("certify", "run the full uniqueness-hypothesis pipeline");
    add_common(cert);

    auto* chk = app.add_subcommand("check-exponents", "evaluate the exponent gates");
    mfg::ExponentProfile prof;
    double q = 0.5, beta = 2.0;
    bool have_q = false, have_beta = false;
    chk->add_option("--r", prof.r)->required();
    chk->add_option("--gamma", prof.gamma)->required();
    chk->add_option("--r1", prof.r1)->required();
    chk->add_option("--gamma1", prof.gamma1)->required();
    chk->add_option("--d", prof.d)->required();
    chk->add_option("--q", q)->each([&](const std::string&) { have_q = true; });
    chk->add_option("--beta", beta)->each([&](const std::string&) { have_beta = true; });

    auto* probe = app.add_subcommand("probe-monotonicity", "randomized monotonicity gaps (CSV on stdout)");
    add_common(probe);
    int samples = 200;
    double mmin = 0.2, mmax = 3.0;
    probe->add_option("--samples", samples);
    probe->add_option("--mmin", mmin);
    probe->add_option("--mmax", mmax);

    app.add_subcommand("selftest", "fast analytic fixed-point checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(config_path, out_dir);
        if (lin->parsed()) return cmd_linearize(config_path, out_dir);
        if (adj->parsed()) return cmd_adjoint(config_path, zeta_path, out_dir);
        if (cert->parsed()) return cmd_certify(config_path, out_dir, seed, seed_set);
        if (chk->parsed()) return cmd_check_exponents(prof, q, beta, have_q && have_beta);
        if (probe->parsed()) return cmd_probe(config_path, samples, seed_set ? seed : 42, mmin, mmax);
        return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
