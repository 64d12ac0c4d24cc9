#include "mfg/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

double conjugate_exponent(double p) {
    if (p < 1.0) throw std::invalid_argument("conjugate_exponent requires p >= 1");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double sobolev_conjugate(double p, int d) {
    if (p < 1.0) throw std::invalid_argument("sobolev_conjugate requires p >= 1");
    if (p >= static_cast<double>(d)) return kInf;
    return p * d / (d - p);
}

void ExponentProfile::validate() const {
    if (!(r > 1.0) || !(gamma > 1.0) || !(r1 > 1.0) || !(gamma1 > 1.0))
        throw std::invalid_argument("all exponents must exceed 1");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
}

bool gate_a4(const ExponentProfile& prof) {
    return prof.r1 >= prof.r && prof.r > 1.0 && prof.gamma1 >= prof.gamma && prof.gamma > 1.0;
}

bool gate_a3(const ExponentProfile& prof) {
    if (prof.gamma >= static_cast<double>(prof.d)) return true;
    return prof.gamma_star() >= prof.r_conj();
}

IntAGate gate_intA(const ExponentProfile& prof) {
    IntAGate out;
    const double ir = 1.0 / prof.r;
    const double ig = 1.0 / prof.gamma;
    if (!(2.0 * ir + ig < 1.0)) {
        out.failure = "2/r + 1/gamma < 1 fails";
        return out;
    }
    if (!(ir + 2.0 * ig < 1.0)) {
        out.failure = "1/r + 2/gamma < 1 fails";
        return out;
    }
    out.pass = true;
    out.q.q1 = 1.0 / (1.0 - ir - ig);
    out.q.q2 = 1.0 / (1.0 - 2.0 * ir);
    out.q.q3 = 1.0 / (1.0 - 2.0 * ir - ig);
    out.q.q4 = 1.0 / (1.0 - ir - 2.0 * ig);
    return out;
}

bool gate_appendix_qbeta(double q, double beta, int d) {
    if (!(q >= 0.5 && q < 1.0)) throw std::invalid_argument("q must lie in [1/2, 1)");
    if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1 (infinity allowed)");
    const double two_q_star = sobolev_conjugate(2.0 * q, d);
    const double beta_conj = conjugate_exponent(beta);
    return 2.0 * beta_conj <= two_q_star;
}

}  // namespace mfg
