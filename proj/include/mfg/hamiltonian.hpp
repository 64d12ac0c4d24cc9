#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mfg/exponents.hpp"
#include "mfg/torus_field.hpp"

namespace mfg {

// Small fixed-capacity types for pointwise algebra (d <= 2, block
// matrices up to (d+1)x(d+1)).
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

enum class HamiltonianFamily { power, congestion };
enum class DensityDomain { positive, nonnegative };

/// Increasing coupling g(m), power family only.
struct CouplingG {
    enum class Kind { power_law, affine } kind = Kind::power_law;
    // power_law: g(t) = c * t^exponent, c > 0, exponent > 0
    // affine:    g(t) = k0 + k1 * t, k1 > 0
    double c = 1.0;
    double exponent = 1.0;
    double k0 = 0.0;
    double k1 = 1.0;

    double eval(double m) const;
    double deriv(double m) const;
};

/// One trigonometric mode of the potential V(x).
struct TrigMode {
    std::array<int, 2> k{0, 0};
    double cos_coef = 0.0;
    double sin_coef = 0.0;
};

struct HamiltonianSpec {
    HamiltonianFamily family = HamiltonianFamily::power;
    double gamma = 2.0;
    double alpha = 1.0;  // congestion only
    CouplingG coupling_g;
    std::vector<TrigMode> potential_V;
    DensityDomain density_domain = DensityDomain::nonnegative;

    double eval_V(const std::array<double, 2>& x) const;
    void validate() const;
};

HamiltonianSpec make_power_spec(double gamma, CouplingG g, std::vector<TrigMode> V = {});
HamiltonianSpec make_congestion_spec(double gamma, double alpha, std::vector<TrigMode> V = {});

double eval_H(const HamiltonianSpec& spec, const std::array<double, 2>& x, const SmallVec& p, double m);
SmallVec eval_DpH(const HamiltonianSpec& spec, const SmallVec& p, double m);
double eval_DmH(const HamiltonianSpec& spec, const SmallVec& p, double m);
SmallMat eval_DppH(const HamiltonianSpec& spec, const SmallVec& p, double m);
SmallVec eval_DpmH(const HamiltonianSpec& spec, const SmallVec& p, double m);

struct GrowthReport {
    bool exponent_relations_ok = false;  // gamma1 >= gamma*r' and the r1 bound
    bool coupling_growth_ok = false;     // g(t) <= c(1+t^r), power family
    double required_gamma1 = 0.0;
    double required_r1 = 0.0;
    double g_prime_min = 0.0;  // min of g' over probe points (power family)
    bool pass() const { return exponent_relations_ok && coupling_growth_ok; }
};

/// Growth/feasibility arithmetic for Assumption-level exponent relations.
GrowthReport check_growth(const HamiltonianSpec& spec, const ExponentProfile& prof);

/// Largest admissible congestion exponent: min{1, (2/gamma)(-1+sqrt(1+gamma^2))}.
double congestion_alpha_max(double gamma);
/// The same threshold before clamping at 1.
double congestion_alpha_max_unclamped(double gamma);

}  // namespace mfg
