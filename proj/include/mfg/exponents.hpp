#pragma once

#include <limits>
#include <optional>
#include <string>

namespace mfg {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Conjugate exponent p' with 1/p + 1/p' = 1; p = 1 maps to infinity.
double conjugate_exponent(double p);

/// Sobolev conjugate p* on T^d: 1/p* = 1/p - 1/d, infinity when p >= d.
double sobolev_conjugate(double p, int d);

/// Integrability exponents of weak (r, gamma) and strong (r1, gamma1)
/// solutions, with the dimension they live in.
struct ExponentProfile {
    double r = 2.0;
    double gamma = 2.0;
    double r1 = 4.0;
    double gamma1 = 4.0;
    int d = 1;

    double r_conj() const { return conjugate_exponent(r); }
    double gamma_conj() const { return conjugate_exponent(gamma); }
    double gamma_star() const { return sobolev_conjugate(gamma, d); }

    void validate() const;  // throws when any exponent is <= 1 or d not in {1,2,3,...}
};

/// r1 >= r > 1 and gamma1 >= gamma > 1.
bool gate_a4(const ExponentProfile& prof);

/// gamma* >= r' whenever gamma < d (vacuous otherwise).
bool gate_a3(const ExponentProfile& prof);

struct HolderExponents {
    double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
};

struct IntAGate {
    bool pass = false;
    std::string failure;  // which strict inequality broke, when pass = false
    HolderExponents q;
};

/// Strict inequalities 2/r + 1/gamma < 1 and 1/r + 2/gamma < 1, and the
/// four Holder-complement exponents they define.
IntAGate gate_intA(const ExponentProfile& prof);

/// 2*beta' <= (2q)* with 1/2 <= q < 1, beta >= 1 (beta may be infinity).
bool gate_appendix_qbeta(double q, double beta, int d);

}  // namespace mfg
