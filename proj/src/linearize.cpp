#include "mfg/linearize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double kDmHCutoff = 1e-12;

double min_eigenvalue(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Largest lambda with T xi = lambda * As xi, T = ((A^-1)_S)^-1.
double tau_at_point(const SmallMat& A) {
    const Eigen::MatrixXd Ad = A;
    const Eigen::MatrixXd As = 0.5 * (Ad + Ad.transpose());
    const Eigen::MatrixXd Ainv = Ad.inverse();
    const Eigen::MatrixXd AinvS = 0.5 * (Ainv + Ainv.transpose());
    const Eigen::MatrixXd T = AinvS.inverse();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()), As,
                                                                 Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    return es.eigenvalues().maxCoeff();
}

void finalize_derived(LinearizationCoeffs& coeffs) {
    const std::size_t N = coeffs.grid.size();
    coeffs.kappa = recompute_kappa(coeffs);
    coeffs.sigma = ScalarField::zeros(coeffs.grid);
    coeffs.tau = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const Eigen::MatrixXd Ad = coeffs.A[i];
        coeffs.sigma.values[i] = min_eigenvalue(0.5 * (Ad + Ad.transpose()));
        coeffs.tau = std::fmax(coeffs.tau, tau_at_point(coeffs.A[i]));
    }
}

}  // namespace

LinearizationCoeffs constant_coeffs(const TorusGrid& g, const SmallMat& A, double a,
                                    const SmallVec& b, const SmallVec& c) {
    LinearizationCoeffs out;
    out.grid = g;
    const std::size_t N = g.size();
    out.A.assign(N, A);
    out.a.assign(N, a);
    out.b.assign(N, b);
    out.c.assign(N, c);
    finalize_derived(out);
    return out;
}

LinearizationCoeffs assemble_coeffs(const HamiltonianSpec& spec, const FieldPair& w) {
    require_density_domain(spec, w.m);
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, true);

    LinearizationCoeffs out;
    out.grid = g;
    const std::size_t N = g.size();
    out.A.resize(N);
    out.a.resize(N);
    out.b.resize(N);
    out.c.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double dm = ph.DmH.values[i];
        if (std::fabs(dm) < kDmHCutoff) {
            std::ostringstream oss;
            oss << "D_mH vanishes at grid point " << i << " (x = " << g.coord(i, 0);
            if (g.dim == 2) oss << ", y = " << g.coord(i, 1);
            oss << "); the elimination is inapplicable";
            throw std::domain_error(oss.str());
        }
        const double mi = w.m.values[i];
        const SmallVec dp = point_vector(ph.DpH, i);
        const SmallVec dpm = point_vector(ph.DpmH, i);
        out.A[i] = mi * ph.DppH[i] - (mi / dm) * (dp * dpm.transpose()) - (dp * dp.transpose()) / dm;
        out.a[i] = 1.0 / dm;
        out.b[i] = -dp / dm;
        out.c[i] = -out.b[i] + (mi / dm) * dpm;
    }
    finalize_derived(out);
    return out;
}

std::vector<double> recompute_kappa(const LinearizationCoeffs& coeffs) {
    const std::size_t N = coeffs.grid.size();
    std::vector<double> kappa(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Eigen::MatrixXd Ad = coeffs.A[i];
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ad);
        const Eigen::VectorXd xc = lu.solve(Eigen::VectorXd(coeffs.c[i]));
        const Eigen::VectorXd xb = lu.solve(Eigen::VectorXd(coeffs.b[i]));
        kappa[i] = Eigen::VectorXd(coeffs.c[i]).dot(xc) + Eigen::VectorXd(coeffs.b[i]).dot(xb) +
                   std::fabs(coeffs.a[i]);
    }
    return kappa;
}

A3monReport check_A3mon(const HamiltonianSpec& spec, const FieldPair& w, double tol_pos) {
    require_density_domain(spec, w.m);
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, true);

    A3monReport rep;
    rep.lambda_min = ScalarField::zeros(g);
    const int d = g.dim;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double mi = w.m.values[i];
        Eigen::MatrixXd M(d + 1, d + 1);
        M.topLeftCorner(d, d) = mi * Eigen::MatrixXd(ph.DppH[i]);
        const SmallVec dpm = point_vector(ph.DpmH, i);
        M.topRightCorner(d, 1) = 0.5 * mi * Eigen::VectorXd(dpm);
        M.bottomLeftCorner(1, d) = 0.5 * mi * Eigen::VectorXd(dpm).transpose();
        M(d, d) = -ph.DmH.values[i];
        rep.lambda_min.values[i] = min_eigenvalue(M);
    }
    rep.global_min = rep.lambda_min.min();
    rep.pass = rep.global_min >= tol_pos;
    return rep;
}

E1E3Report check_e1_e3(const HamiltonianSpec& spec, const FieldPair& w, const LinearizationCoeffs& coeffs,
                       double tol_pos) {
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, true);

    E1E3Report rep;
    rep.sigma = coeffs.sigma;
    rep.tau = coeffs.tau;
    rep.e3_min_eig = ScalarField::zeros(g);
    const int d = g.dim;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double dm = ph.DmH.values[i];
        const double mi = w.m.values[i];
        const SmallVec dpm = point_vector(ph.DpmH, i);
        Eigen::MatrixXd M(d + 1, d + 1);
        const Eigen::MatrixXd Ad = coeffs.A[i];
        M.topLeftCorner(d, d) = 0.5 * (Ad + Ad.transpose());
        M.topRightCorner(d, 1) = 0.5 * (mi / dm) * Eigen::VectorXd(dpm);
        M.bottomLeftCorner(1, d) = 0.5 * (mi / dm) * Eigen::VectorXd(dpm).transpose();
        M(d, d) = -1.0 / dm;
        rep.e3_min_eig.values[i] = min_eigenvalue(M);
    }
    rep.pass = rep.sigma.min() > 0.0 && rep.e3_min_eig.min() > tol_pos;
    return rep;
}

std::optional<ExponentWitness> search_exponent_witness(const LinearizationCoeffs& coeffs, int d) {
    if (!(coeffs.sigma.min() > 0.0)) return std::nullopt;
    const std::vector<double> betas{kInf, 8.0, 4.0, 2.0, 1.5, 1.0};
    std::optional<ExponentWitness> best;
    for (double beta : betas) {
        for (double q = 0.5; q < 0.975; q += 0.05) {
            if (!gate_appendix_qbeta(q, beta, d)) continue;
            ExponentWitness wit;
            wit.q = q;
            wit.beta = beta;
            ScalarField pow_sigma = coeffs.sigma;
            for (double& v : pow_sigma.values) v = std::pow(v, q / (q - 1.0));
            wit.sigma_integral = integrate(pow_sigma);
            if (std::isinf(beta)) {
                wit.kappa_norm = *std::max_element(coeffs.kappa.begin(), coeffs.kappa.end());
            } else {
                ScalarField kp = ScalarField::zeros(coeffs.grid);
                for (std::size_t i = 0; i < kp.values.size(); ++i)
                    kp.values[i] = std::pow(coeffs.kappa[i], beta);
                wit.kappa_norm = std::pow(integrate(kp), 1.0 / beta);
            }
            best = wit;
            break;  // first admissible q for the largest feasible beta
        }
        if (best) break;
    }
    return best;
}

double quadratic_form_Q(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir) {
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, true);
    const VectorField Dv = gradient(dir.u);

    ScalarField integrand = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double eta = dir.m.values[i];
        const SmallVec dv = point_vector(Dv, i);
        const SmallVec dpm = point_vector(ph.DpmH, i);
        double s = -ph.DmH.values[i] * eta * eta;
        s += w.m.values[i] * dv.dot(ph.DppH[i] * dv);
        s += w.m.values[i] * dpm.dot(dv) * eta;
        integrand.values[i] = s;
    }
    return integrate(integrand);
}

FieldPair linearized_operator(const HamiltonianSpec& spec, const FieldPair& w, const FieldPair& dir) {
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, true);
    const VectorField Dv = gradient(dir.u);

    VectorField flux = VectorField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SmallVec dv = point_vector(Dv, i);
        const SmallVec adv = ph.DppH[i] * dv;
        for (int aix = 0; aix < g.dim; ++aix)
            flux.comps[aix].values[i] =
                ph.DpH.comps[aix].values[i] * dir.m.values[i] - w.m.values[i] * adv[aix];
    }
    const ScalarField div_flux = divergence(flux);

    FieldPair out = FieldPair::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.m.values[i] = -dir.m.values[i] + div_flux.values[i];
        double s = dir.u.values[i] - ph.DmH.values[i] * dir.m.values[i];
        for (int aix = 0; aix < g.dim; ++aix)
            s += (ph.DpH.comps[aix].values[i] +
                  w.m.values[i] * ph.DpmH.comps[aix].values[i]) *
                 Dv.comps[aix].values[i];
        out.u.values[i] = s;
    }
    return out;
}

ScalarField eliminated_elliptic_residual(const LinearizationCoeffs& coeffs, const ScalarField& vbar) {
    const TorusGrid& g = coeffs.grid;
    const VectorField Dv = gradient(vbar);
    VectorField flux = VectorField::zeros(g);
    ScalarField zero_order = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SmallVec dv = point_vector(Dv, i);
        const SmallVec f = coeffs.A[i] * dv + coeffs.b[i] * vbar.values[i];
        for (int aix = 0; aix < g.dim; ++aix) flux.comps[aix].values[i] = f[aix];
        zero_order.values[i] = coeffs.a[i] * vbar.values[i] + coeffs.c[i].dot(dv);
    }
    ScalarField out = divergence(flux);
    out *= -1.0;
    out -= zero_order;
    return out;
}

}  // namespace mfg
