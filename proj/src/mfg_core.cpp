#include "mfg/mfg_core.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

FieldPair operator+(FieldPair a, const FieldPair& b) {
    a.m += b.m;
    a.u += b.u;
    return a;
}

FieldPair operator-(FieldPair a, const FieldPair& b) {
    a.m -= b.m;
    a.u -= b.u;
    return a;
}

FieldPair operator*(double s, FieldPair a) {
    a.m *= s;
    a.u *= s;
    return a;
}

void require_density_domain(const HamiltonianSpec& spec, const ScalarField& m) {
    const bool positive =
        spec.family == HamiltonianFamily::congestion || spec.density_domain == DensityDomain::positive;
    const double lo = m.min();
    if (positive) {
        if (!(lo > 1e-12)) throw std::domain_error("density leaves the positive domain (min m <= 1e-12)");
    } else if (lo < 0.0) {
        throw std::domain_error("density is negative");
    }
}

SmallVec point_vector(const VectorField& f, std::size_t i) {
    SmallVec p(f.grid.dim);
    for (int a = 0; a < f.grid.dim; ++a) p[a] = f.comps[a].values[i];
    return p;
}

PointwiseHamiltonian evaluate_hamiltonian(const HamiltonianSpec& spec, const ScalarField& m,
                                          const VectorField& Du, bool with_second_derivatives) {
    const TorusGrid& g = m.grid;
    PointwiseHamiltonian out;
    out.H = ScalarField::zeros(g);
    out.DmH = ScalarField::zeros(g);
    out.DpH = VectorField::zeros(g);
    if (with_second_derivatives) {
        out.DpmH = VectorField::zeros(g);
        out.DppH.resize(g.size());
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        const SmallVec p = point_vector(Du, i);
        const double mi = m.values[i];
        const std::array<double, 2> x{g.coord(i, 0), g.dim == 2 ? g.coord(i, 1) : 0.0};
        out.H.values[i] = eval_H(spec, x, p, mi);
        out.DmH.values[i] = eval_DmH(spec, p, mi);
        const SmallVec dp = eval_DpH(spec, p, mi);
        for (int a = 0; a < g.dim; ++a) out.DpH.comps[a].values[i] = dp[a];
        if (with_second_derivatives) {
            out.DppH[i] = eval_DppH(spec, p, mi);
            const SmallVec dpm = eval_DpmH(spec, p, mi);
            for (int a = 0; a < g.dim; ++a) out.DpmH.comps[a].values[i] = dpm[a];
        }
    }
    return out;
}

FieldPair apply_operator(const HamiltonianSpec& spec, const FieldPair& w) {
    require_density_domain(spec, w.m);
    const TorusGrid& g = w.m.grid;
    const VectorField Du = gradient(w.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, w.m, Du, false);

    FieldPair out = FieldPair::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        out.m.values[i] = -w.u.values[i] - ph.H.values[i];

    VectorField flux = VectorField::zeros(g);
    for (int a = 0; a < g.dim; ++a) flux.comps[a] = hadamard(w.m, ph.DpH.comps[a]);
    const ScalarField div_flux = divergence(flux);
    for (std::size_t i = 0; i < g.size(); ++i)
        out.u.values[i] = w.m.values[i] - div_flux.values[i] - 1.0;
    return out;
}

double strong_residual_norm(const HamiltonianSpec& spec, const FieldPair& w) {
    const FieldPair r = apply_operator(spec, w);
    return std::fmax(r.m.max_abs(), r.u.max_abs());
}

double vi_lhs(const HamiltonianSpec& spec, const FieldPair& test, const FieldPair& cand) {
    require_density_domain(spec, test.m);
    const TorusGrid& g = test.m.grid;
    const VectorField Dv = gradient(test.u);
    const PointwiseHamiltonian ph = evaluate_hamiltonian(spec, test.m, Dv, false);
    const VectorField Du_tilde = gradient(cand.u);

    double acc = 0.0;
    const double hd = g.dim == 1 ? g.h : g.h * g.h;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double eta = test.m.values[i];
        const double v = test.u.values[i];
        double s = (eta - cand.m.values[i]) * (-v - ph.H.values[i]);
        s += (v - cand.u.values[i]) * (eta - 1.0);
        for (int a = 0; a < g.dim; ++a)
            s += (Dv.comps[a].values[i] - Du_tilde.comps[a].values[i]) * eta * ph.DpH.comps[a].values[i];
        acc += s;
    }
    return acc * hd;
}

double vi_lhs_divergence_form(const HamiltonianSpec& spec, const FieldPair& test, const FieldPair& cand) {
    require_density_domain(spec, test.m);
    const FieldPair Aw = apply_operator(spec, test);
    const FieldPair diff = test - cand;
    return pair_inner(diff.m, diff.u, Aw.m, Aw.u);
}

double monotonicity_gap(const HamiltonianSpec& spec, const FieldPair& w1, const FieldPair& w2) {
    const FieldPair A1 = apply_operator(spec, w1);
    const FieldPair A2 = apply_operator(spec, w2);
    const FieldPair dw = w1 - w2;
    const FieldPair dA = A1 - A2;
    return pair_inner(dw.m, dw.u, dA.m, dA.u);
}

FieldPair random_test_pair(const TorusGrid& g, int max_freq, double positivity_floor, std::uint64_t seed) {
    if (max_freq > g.n / 4) throw std::invalid_argument("max_freq must not exceed n/4");
    std::mt19937_64 rng(seed);
    FieldPair out = FieldPair::zeros(g);
    out.u = random_trig_polynomial(g, max_freq, rng);
    const ScalarField base = random_trig_polynomial(g, max_freq, rng);
    out.m = ScalarField::constant(g, positivity_floor);
    for (std::size_t i = 0; i < g.size(); ++i)
        out.m.values[i] += base.values[i] * base.values[i];
    return out;
}

}  // namespace mfg
