#include "mfg/strong_solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double kCollapseFloor = 1e-10;
// Dense Newton systems up to this many unknowns; matrix-free BiCGSTAB above.
constexpr std::size_t kDenseLimit = 4096;

// Pointwise data frozen at the current iterate; jacobian applications
// reuse it across columns.
struct JacobianContext {
    const HamiltonianSpec& spec;
    const FieldPair& w;
    double eps;
    VectorField Du;
    PointwiseHamiltonian ph;

    JacobianContext(const HamiltonianSpec& s, const FieldPair& w_, double eps_)
        : spec(s), w(w_), eps(eps_), Du(gradient(w_.u)), ph(evaluate_hamiltonian(s, w_.m, Du, true)) {}

    FieldPair apply(const FieldPair& dir) const {
        const TorusGrid& g = w.m.grid;
        const VectorField Ddu = gradient(dir.u);
        FieldPair out = FieldPair::zeros(g);

        for (std::size_t i = 0; i < g.size(); ++i) {
            double s = -dir.u.values[i] - ph.DmH.values[i] * dir.m.values[i];
            for (int a = 0; a < g.dim; ++a) s -= ph.DpH.comps[a].values[i] * Ddu.comps[a].values[i];
            out.m.values[i] = s;
        }

        VectorField dflux = VectorField::zeros(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const SmallVec ddu = point_vector(Ddu, i);
            const SmallVec dp = ph.DppH[i] * ddu;
            for (int a = 0; a < g.dim; ++a) {
                dflux.comps[a].values[i] = dir.m.values[i] * ph.DpH.comps[a].values[i] +
                                           w.m.values[i] * dp[a] +
                                           w.m.values[i] * ph.DpmH.comps[a].values[i] * dir.m.values[i];
            }
        }
        const ScalarField div_dflux = divergence(dflux);
        for (std::size_t i = 0; i < g.size(); ++i)
            out.u.values[i] = dir.m.values[i] - div_dflux.values[i];

        if (eps > 0.0) {
            out.m -= eps * laplacian(dir.u);
            out.u -= eps * laplacian(dir.m);
        }
        return out;
    }

    // Direction expressed in (dmu, du); dm = m * dmu.
    FieldPair apply_log(const FieldPair& dir_log) const {
        FieldPair dir = dir_log;
        dir.m = hadamard(w.m, dir_log.m);
        return apply(dir);
    }
};

Eigen::VectorXd flatten(const FieldPair& w) {
    const std::size_t N = w.m.grid.size();
    Eigen::VectorXd z(2 * N);
    for (std::size_t i = 0; i < N; ++i) {
        z[static_cast<Eigen::Index>(i)] = w.m.values[i];
        z[static_cast<Eigen::Index>(N + i)] = w.u.values[i];
    }
    return z;
}

FieldPair unflatten(const TorusGrid& g, const Eigen::VectorXd& z) {
    FieldPair w = FieldPair::zeros(g);
    const std::size_t N = g.size();
    for (std::size_t i = 0; i < N; ++i) {
        w.m.values[i] = z[static_cast<Eigen::Index>(i)];
        w.u.values[i] = z[static_cast<Eigen::Index>(N + i)];
    }
    return w;
}

// Solves J s = -F in the (dmu, du) variables.
FieldPair newton_direction(const JacobianContext& ctx, const FieldPair& F) {
    const TorusGrid& g = ctx.w.m.grid;
    const std::size_t N = g.size();
    const Eigen::VectorXd rhs = -flatten(F);

    if (2 * N <= kDenseLimit) {
        Eigen::MatrixXd J(2 * N, 2 * N);
        FieldPair e = FieldPair::zeros(g);
        for (std::size_t j = 0; j < 2 * N; ++j) {
            double* slot = j < N ? &e.m.values[j] : &e.u.values[j - N];
            *slot = 1.0;
            J.col(static_cast<Eigen::Index>(j)) = flatten(ctx.apply_log(e));
            *slot = 0.0;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        return unflatten(g, lu.solve(rhs));
    }

    // Matrix-free BiCGSTAB fallback for grids past the dense threshold.
    auto matvec = [&](const Eigen::VectorXd& x) { return flatten(ctx.apply_log(unflatten(g, x))); };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * N);
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd r0 = r, p = r;
    double rho = r0.dot(r);
    const double tol2 = 1e-24 * rhs.squaredNorm();
    for (int it = 0; it < 2000 && r.squaredNorm() > tol2; ++it) {
        const Eigen::VectorXd v = matvec(p);
        const double a = rho / r0.dot(v);
        const Eigen::VectorXd s = r - a * v;
        const Eigen::VectorXd t = matvec(s);
        const double om = t.dot(s) / t.squaredNorm();
        x += a * p + om * s;
        r = s - om * t;
        const double rho_new = r0.dot(r);
        const double beta = (rho_new / rho) * (a / om);
        rho = rho_new;
        p = r + beta * (p - om * v);
    }
    return unflatten(g, x);
}

}  // namespace

void SolverOptions::validate() const {
    double prev = kInf;
    for (double e : visc_schedule) {
        if (!(e > 0.0) || !(e < prev)) throw std::invalid_argument("visc_schedule must be strictly decreasing and positive");
        prev = e;
    }
    if (!(newton_tol > 0.0) || max_newton < 1) throw std::invalid_argument("bad solver options");
}

FieldPair residual_with_viscosity(const HamiltonianSpec& spec, const FieldPair& w, double eps) {
    if (eps < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
    FieldPair r = apply_operator(spec, w);
    if (eps > 0.0) {
        r.m -= eps * laplacian(w.u);
        r.u -= eps * laplacian(w.m);
    }
    return r;
}

FieldPair jacobian_apply(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir, double eps) {
    return JacobianContext(spec, w, eps).apply(dir);
}

bool check_density_floor(const ScalarField& m, double c0_min) { return m.min() >= c0_min; }

std::pair<FieldPair, SolveReport> solve_strong(const HamiltonianSpec& spec, const TorusGrid& grid,
                                               const SolverOptions& opts) {
    spec.validate();
    opts.validate();

    // m = 1, u = -H(x, 0, 1): exact when V = 0.
    FieldPair w = FieldPair::zeros(grid);
    w.m = ScalarField::constant(grid, 1.0);
    const SmallVec p0 = SmallVec::Zero(grid.dim);
    w.u = ScalarField::sample(grid, [&](const std::array<double, 2>& x) { return -eval_H(spec, x, p0, 1.0); });

    std::vector<double> schedule = opts.visc_schedule;
    if (opts.final_unregularized_stage) schedule.push_back(0.0);

    SolveReport report;
    bool ok = true;

    // One damped Newton run at fixed viscosity; returns the final residual
    // norm and updates w in place.
    auto run_stage = [&](double eps, double tol, StageReport& stage) {
        stage.eps = eps;
        FieldPair F = residual_with_viscosity(spec, w, eps);
        double fnorm = std::fmax(F.m.max_abs(), F.u.max_abs());
        int it = 0;
        while (fnorm > tol && it < opts.max_newton) {
            const JacobianContext ctx(spec, w, eps);
            const FieldPair dir = newton_direction(ctx, F);
            double t = 1.0;
            bool accepted = false;
            while (t >= opts.min_step) {
                FieldPair trial = w;
                for (std::size_t i = 0; i < grid.size(); ++i)
                    trial.m.values[i] = w.m.values[i] * std::exp(t * dir.m.values[i]);
                trial.u += t * dir.u;
                if (trial.m.min() < kCollapseFloor) {
                    t *= opts.damping_factor;
                    continue;
                }
                const FieldPair Ft = residual_with_viscosity(spec, trial, eps);
                const double fn = std::fmax(Ft.m.max_abs(), Ft.u.max_abs());
                if (fn < fnorm) {
                    w = trial;
                    F = Ft;
                    fnorm = fn;
                    accepted = true;
                    break;
                }
                t *= opts.damping_factor;
            }
            ++it;
            if (!accepted) break;  // line search exhausted
        }
        stage.iterations = it;
        stage.residual = fnorm;
        return fnorm;
    };

    for (double eps : schedule) {
        // The unregularized stage stalls at spectral-differentiation roundoff,
        // so accept a small absolute floor above final_tol there.
        const double tol = eps == 0.0 ? std::fmax(opts.final_tol, 1e-11) : opts.newton_tol;
        const FieldPair backup = w;
        StageReport stage;
        double fnorm = run_stage(eps, tol, stage);
        report.stages.push_back(stage);

        // A continuation step that is too aggressive can strand the Newton
        // iteration; retry from the last good iterate with smaller viscosity.
        double retry_eps = eps;
        int rescues = 0;
        while (fnorm > tol && eps > 0.0 && rescues < 8) {
            w = backup;
            retry_eps *= 0.25;
            StageReport rescue;
            fnorm = run_stage(retry_eps, tol, rescue);
            report.stages.push_back(rescue);
            ++rescues;
        }
        if (fnorm > tol) {
            ok = false;
            break;
        }
    }

    report.residual = strong_residual_norm(spec, w);
    report.c0_hat = w.m.min();
    report.converged = ok && report.residual <= 1e-8;
    return {w, report};
}

}  // namespace mfg
