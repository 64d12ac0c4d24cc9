// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "mfg/adjoint.hpp"
#include "mfg/certify.hpp"
#include "mfg/config.hpp"

using namespace mfg;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<TrigMode> cos_potential(double amp) {
    TrigMode mode;
    mode.k = {1, 0};
    mode.cos_coef = amp;
    return {mode};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

int main() {
    // 1. analytic fixed point, power family
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto [w, rep] = solve_strong(make_power_spec(2.0, CouplingG{}), make_grid(1, 64));
        const double elapsed = seconds_since(t0);
        double err = 0.0;
        for (std::size_t i = 0; i < w.m.values.size(); ++i)
            err = std::fmax(err, std::fmax(std::fabs(w.m.values[i] - 1.0), std::fabs(w.u.values[i] - 0.5)));
        report(1, "power constant fixed point", rep.converged && rep.residual <= 1e-12 && err <= 1e-12 && elapsed < 1.0,
               "residual " + fmt(rep.residual) + ", " + fmt(elapsed) + " s");
    }

    // 2. analytic fixed point, congestion family
    {
        auto [w, rep] = solve_strong(make_congestion_spec(2.0, 1.0), make_grid(1, 64));
        double err = 0.0;
        for (std::size_t i = 0; i < w.m.values.size(); ++i)
            err = std::fmax(err, std::fmax(std::fabs(w.m.values[i] - 1.0), std::fabs(w.u.values[i] + 0.5)));
        report(2, "congestion constant fixed point", rep.converged && rep.residual <= 1e-12 && err <= 1e-12,
               "residual " + fmt(rep.residual));
    }

    // 3. self-convergence under refinement
    {
        const auto t0 = std::chrono::steady_clock::now();
        const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
        auto [w64, r64] = solve_strong(spec, make_grid(1, 64));
        auto [w128, r128] = solve_strong(spec, make_grid(1, 128));
        double err = 0.0;
        for (int i = 0; i < 64; ++i) {
            err = std::fmax(err, std::fabs(w64.m.values[i] - w128.m.values[2 * i]));
            err = std::fmax(err, std::fabs(w64.u.values[i] - w128.u.values[2 * i]));
        }
        const double elapsed = seconds_since(t0);
        report(3, "self-convergence n=64 vs n=128", r64.converged && r128.converged && err <= 1e-8 && elapsed < 30.0,
               "diff " + fmt(err) + ", " + fmt(elapsed) + " s");
    }

    // 4. monotonicity probes for both families
    {
        const TorusGrid g = make_grid(1, 64);
        const HamiltonianSpec power = make_power_spec(2.0, CouplingG{});
        const HamiltonianSpec cong = make_congestion_spec(2.0, 0.5);
        double worst = kInf;
        for (std::uint64_t s = 0; s < 200; ++s) {
            const FieldPair w1 = random_test_pair(g, g.n / 4, 0.2, 2 * s);
            const FieldPair w2 = random_test_pair(g, g.n / 4, 0.2, 2 * s + 1);
            worst = std::fmin(worst, monotonicity_gap(power, w1, w2));
            worst = std::fmin(worst, monotonicity_gap(cong, w1, w2));
        }
        report(4, "monotonicity probe, 200 pairs", worst >= -1e-8, "min gap " + fmt(worst));
    }

    // 5. VI consistency and rejection of a perturbed candidate
    {
        const TorusGrid g = make_grid(1, 64);
        const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
        auto [w, rep] = solve_strong(spec, g);
        const ViProbeResult ok = vi_probe(spec, w, 200, 77, g.n / 4);

        FieldPair bad = w;
        for (std::size_t i = 0; i < g.size(); ++i)
            bad.u.values[i] += 0.3 * std::cos(2.0 * M_PI * g.coord(i, 0));
        double min_bad = vi_probe(spec, bad, 200, 77, g.n / 4).min_lhs;
        // steepest-descent test pair: moves against the operator value
        const FieldPair Abad = apply_operator(spec, bad);
        for (double delta : {0.01, 0.05, 0.1}) {
            const FieldPair probe = bad - delta * Abad;
            if (probe.m.min() > 1e-6) min_bad = std::fmin(min_bad, vi_lhs(spec, probe, bad));
        }
        report(5, "variational-inequality probe", rep.converged && ok.min_lhs >= -1e-9 && min_bad < -1e-3,
               "min " + fmt(ok.min_lhs) + ", perturbed min " + fmt(min_bad));
    }

    // 6. linearization coefficients and kappa cross-reconstruction
    {
        auto [w, rep] = solve_strong(make_power_spec(2.0, CouplingG{}), make_grid(1, 64));
        const LinearizationCoeffs cst = assemble_coeffs(make_power_spec(2.0, CouplingG{}), w);
        double err = 0.0;
        for (std::size_t i = 0; i < w.m.values.size(); ++i) {
            err = std::fmax(err, std::fabs(cst.A[i](0, 0) - 1.0));
            err = std::fmax(err, std::fabs(cst.a[i] + 1.0));
            err = std::fmax(err, std::fabs(cst.b[i][0]));
            err = std::fmax(err, std::fabs(cst.c[i][0]));
            err = std::fmax(err, std::fabs(cst.kappa[i] - 1.0));
        }
        const HamiltonianSpec vspec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
        auto [wv, repv] = solve_strong(vspec, make_grid(1, 64));
        const LinearizationCoeffs coeffs = assemble_coeffs(vspec, wv);
        const std::vector<double> again = recompute_kappa(coeffs);
        double rerr = 0.0;
        for (std::size_t i = 0; i < again.size(); ++i)
            rerr = std::fmax(rerr, std::fabs(again[i] - coeffs.kappa[i]) / std::fmax(1.0, std::fabs(coeffs.kappa[i])));
        report(6, "linearization coefficients", rep.converged && repv.converged && err <= 1e-12 && rerr <= 1e-10,
               "const err " + fmt(err) + ", recon err " + fmt(rerr));
    }

    // 7. strict-monotonicity margin at the constant solutions
    {
        auto [wp, rp] = solve_strong(make_power_spec(2.0, CouplingG{}), make_grid(1, 64));
        const double lp = check_A3mon(make_power_spec(2.0, CouplingG{}), wp).global_min;
        auto [wc, rc] = solve_strong(make_congestion_spec(2.0, 1.0), make_grid(1, 64));
        const double lc = check_A3mon(make_congestion_spec(2.0, 1.0), wc).global_min;
        report(7, "monotonicity margin lambda_min", rp.converged && rc.converged &&
                   std::fabs(lp - 1.0) <= 1e-12 && std::fabs(lc - 0.5) <= 1e-12,
               "power " + fmt(lp) + ", congestion " + fmt(lc));
    }

    // 8 + 13. end-to-end congestion certificate, sigma bound and caveats
    bool sigma_ok = false, cert_ok = false;
    {
        const auto t0 = std::chrono::steady_clock::now();
        RunConfig cfg;
        cfg.grid_d = 1;
        cfg.grid_n = 128;
        cfg.hamiltonian = make_congestion_spec(2.0, 0.5, cos_potential(0.2));
        FieldPair w;
        LinearizationCoeffs coeffs;
        const Certificate cert = certify(cfg, &w, &coeffs);
        const double elapsed = seconds_since(t0);

        sigma_ok = !coeffs.kappa.empty();
        for (std::size_t i = 0; i < w.m.values.size() && sigma_ok; ++i)
            sigma_ok = coeffs.sigma.values[i] >= std::pow(w.m.values[i], 1.0 - cfg.hamiltonian.alpha) - 1e-10;
        report(8, "congestion ellipticity weight bound", sigma_ok);

        bool discrete_named = !cert.caveats.empty();
        int discrete_count = 0;
        for (const auto& c : cert.caveats)
            if (c.find("discrete evidence only") != std::string::npos) ++discrete_count;
        cert_ok = cert.pass_a && elapsed < 60.0 && discrete_named && discrete_count >= 2;
        report(13, "end-to-end congestion certificate", cert_ok,
               "pass_a " + std::string(cert.pass_a ? "true" : "false") + ", " +
                   std::to_string(cert.caveats.size()) + " caveats, " + fmt(elapsed) + " s");
    }

    // 9. threshold arithmetic
    {
        const bool t1 = congestion_alpha_max(2.0) == 1.0;
        const bool t2 = std::fabs(congestion_alpha_max_unclamped(2.0) - (std::sqrt(5.0) - 1.0)) <= 1e-12;
        const IntAGate gate = gate_intA({4.0, 4.0, 8.0, 8.0, 1});
        const bool t3 = gate.pass && std::fabs(gate.q.q1 - 2.0) <= 1e-12 && std::fabs(gate.q.q2 - 2.0) <= 1e-12 &&
                        std::fabs(gate.q.q3 - 4.0) <= 1e-12 && std::fabs(gate.q.q4 - 4.0) <= 1e-12;
        report(9, "threshold arithmetic", t1 && t2 && t3);
    }

    // 10. adjoint solve is Fourier-exact and shift-independent
    {
        const TorusGrid g = make_grid(1, 32);
        SmallMat A(1, 1);
        A.setIdentity();
        SmallVec zero(1);
        zero.setZero();
        AdjointProblem problem;
        problem.coeffs = constant_coeffs(g, A, -1.0, zero, zero);
        problem.zeta = ScalarField::sample(g, [](const std::array<double, 2>& x) {
            return std::cos(2.0 * M_PI * x[0]);
        });
        auto [vbar, rep] = solve_adjoint(problem);
        const double factor = 1.0 / (1.0 + 4.0 * M_PI * M_PI);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::fmax(err, std::fabs(vbar.values[i] - factor * problem.zeta.values[i]));
        problem.upsilon0 = 2.0;
        const ScalarField via2 = solve_adjoint_fredholm(problem);
        problem.upsilon0 = 4.0;
        const ScalarField via4 = solve_adjoint_fredholm(problem);
        report(10, "adjoint Fourier exactness", err <= 1e-10 && (via2 - via4).max_abs() <= 1e-9,
               "err " + fmt(err));
    }

    // 11. weighted-space inequality suite on a certified run
    {
        const TorusGrid g = make_grid(1, 64);
        const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
        auto [w, rep] = solve_strong(spec, g);
        AdjointProblem problem;
        problem.coeffs = assemble_coeffs(spec, w);
        problem.zeta = ScalarField::constant(g, 0.0);
        const InequalityReport shift = verify_coercive_shift(problem, 100);
        const InequalityReport bound = verify_boundedness(problem.coeffs, 100);
        const InequalityReport embed = verify_embeddings(problem.coeffs.sigma, problem.coeffs.kappa, 0.5, kInf, 100);
        report(11, "weighted-space inequality suite",
               rep.converged && shift.pass && bound.pass && embed.pass &&
                   std::fmin(shift.min_slack, std::fmin(bound.min_slack, embed.min_slack)) >= -1e-9,
               "slacks " + fmt(shift.min_slack) + " / " + fmt(bound.min_slack) + " / " + fmt(embed.min_slack));
    }

    // 12. homogeneity of the monotonicity quadratic form
    {
        const HamiltonianSpec spec = make_power_spec(2.0, CouplingG{}, cos_potential(0.2));
        auto [w, rep] = solve_strong(spec, make_grid(1, 64));
        const auto rows = perturbation_separation(spec, w, {1e-3, 1e-2, 1e-1});
        bool ok = rep.converged && rows.size() == 3 && rows[0].q_over_delta_sq > 0.0;
        for (const auto& row : rows)
            ok = ok && std::fabs(row.q_over_delta_sq / rows[0].q_over_delta_sq - 1.0) <= 0.05;
        report(12, "quadratic-form homogeneity", ok);
    }

    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
