#include "mfg/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDensityFloor = 1e-12;

void require_density(const HamiltonianSpec& spec, double m) {
    if (spec.family == HamiltonianFamily::congestion || spec.density_domain == DensityDomain::positive) {
        if (!(m > kDensityFloor)) throw std::domain_error("density must be strictly positive");
    } else if (m < 0.0) {
        throw std::domain_error("density must be nonnegative");
    }
}

}  // namespace

double CouplingG::eval(double m) const {
    return kind == Kind::power_law ? c * std::pow(m, exponent) : k0 + k1 * m;
}

double CouplingG::deriv(double m) const {
    return kind == Kind::power_law ? c * exponent * std::pow(m, exponent - 1.0) : k1;
}

double HamiltonianSpec::eval_V(const std::array<double, 2>& x) const {
    double v = 0.0;
    for (const auto& mode : potential_V) {
        const double ph = kTwoPi * (mode.k[0] * x[0] + mode.k[1] * x[1]);
        v += mode.cos_coef * std::cos(ph) + mode.sin_coef * std::sin(ph);
    }
    return v;
}

void HamiltonianSpec::validate() const {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
    if (family == HamiltonianFamily::congestion) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        if (density_domain != DensityDomain::positive)
            throw std::invalid_argument("congestion family requires a strictly positive density domain");
    } else {
        // g must be increasing; probe the derivative on a few sample densities
        for (double m : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            if (!(coupling_g.deriv(m) > 0.0)) throw std::invalid_argument("coupling g must be increasing");
        }
    }
}

HamiltonianSpec make_power_spec(double gamma, CouplingG g, std::vector<TrigMode> V) {
    HamiltonianSpec spec;
    spec.family = HamiltonianFamily::power;
    spec.gamma = gamma;
    spec.coupling_g = g;
    spec.potential_V = std::move(V);
    spec.density_domain = DensityDomain::nonnegative;
    spec.validate();
    return spec;
}

HamiltonianSpec make_congestion_spec(double gamma, double alpha, std::vector<TrigMode> V) {
    HamiltonianSpec spec;
    spec.family = HamiltonianFamily::congestion;
    spec.gamma = gamma;
    spec.alpha = alpha;
    spec.potential_V = std::move(V);
    spec.density_domain = DensityDomain::positive;
    spec.validate();
    return spec;
}

double eval_H(const HamiltonianSpec& spec, const std::array<double, 2>& x, const SmallVec& p, double m) {
    require_density(spec, m);
    const double s = 1.0 + p.squaredNorm();
    const double kinetic = std::pow(s, spec.gamma / 2.0) / spec.gamma;
    if (spec.family == HamiltonianFamily::power) return kinetic - spec.coupling_g.eval(m) + spec.eval_V(x);
    return kinetic / std::pow(m, spec.alpha) + spec.eval_V(x);
}

SmallVec eval_DpH(const HamiltonianSpec& spec, const SmallVec& p, double m) {
    require_density(spec, m);
    const double s = 1.0 + p.squaredNorm();
    SmallVec out = std::pow(s, spec.gamma / 2.0 - 1.0) * p;
    if (spec.family == HamiltonianFamily::congestion) out /= std::pow(m, spec.alpha);
    return out;
}

double eval_DmH(const HamiltonianSpec& spec, const SmallVec& p, double m) {
    require_density(spec, m);
    if (spec.family == HamiltonianFamily::power) return -spec.coupling_g.deriv(m);
    const double s = 1.0 + p.squaredNorm();
    return -spec.alpha * std::pow(s, spec.gamma / 2.0) / (spec.gamma * std::pow(m, spec.alpha + 1.0));
}

SmallMat eval_DppH(const HamiltonianSpec& spec, const SmallVec& p, double m) {
    require_density(spec, m);
    const auto d = p.size();
    const double s = 1.0 + p.squaredNorm();
    SmallMat out = std::pow(s, spec.gamma / 2.0 - 1.0) * SmallMat::Identity(d, d);
    out += (spec.gamma - 2.0) * std::pow(s, spec.gamma / 2.0 - 2.0) * (p * p.transpose());
    if (spec.family == HamiltonianFamily::congestion) out /= std::pow(m, spec.alpha);
    return out;
}

SmallVec eval_DpmH(const HamiltonianSpec& spec, const SmallVec& p, double m) {
    require_density(spec, m);
    if (spec.family == HamiltonianFamily::power) return SmallVec::Zero(p.size());
    const double s = 1.0 + p.squaredNorm();
    return -spec.alpha * std::pow(s, spec.gamma / 2.0 - 1.0) / std::pow(m, spec.alpha + 1.0) * p;
}

GrowthReport check_growth(const HamiltonianSpec& spec, const ExponentProfile& prof) {
    GrowthReport rep;
    const double rc = prof.r_conj();
    const double gc = prof.gamma_conj();
    rep.required_gamma1 = spec.gamma * rc;
    if (spec.family == HamiltonianFamily::power) {
        rep.required_r1 = std::fmax(prof.r * rc, prof.r * gc);
        rep.exponent_relations_ok = prof.gamma1 >= rep.required_gamma1 && prof.r1 >= rep.required_r1;
        // g(t) <= c(1+t^r): decidable for the two parametric families
        if (spec.coupling_g.kind == CouplingG::Kind::power_law) {
            rep.coupling_growth_ok = spec.coupling_g.exponent <= prof.r;
        } else {
            rep.coupling_growth_ok = prof.r >= 1.0;
        }
        rep.g_prime_min = kInf;
        for (double m : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0})
            rep.g_prime_min = std::fmin(rep.g_prime_min, spec.coupling_g.deriv(m));
    } else {
        rep.required_r1 = gc * prof.r;
        rep.exponent_relations_ok = prof.gamma1 >= rep.required_gamma1 && prof.r1 >= rep.required_r1;
        rep.coupling_growth_ok = true;  // no coupling g in the congestion family
        rep.g_prime_min = 0.0;
    }
    return rep;
}

double congestion_alpha_max_unclamped(double gamma) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be >= 1");
    return (2.0 / gamma) * (-1.0 + std::sqrt(1.0 + gamma * gamma));
}

double congestion_alpha_max(double gamma) {
    return std::fmin(1.0, congestion_alpha_max_unclamped(gamma));
}

}  // namespace mfg
