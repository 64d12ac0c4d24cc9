#pragma once

#include <cstdint>

#include "mfg/hamiltonian.hpp"
#include "mfg/torus_field.hpp"

namespace mfg {

/// Density / value-function pair on a shared grid.
struct FieldPair {
    ScalarField m;
    ScalarField u;

    static FieldPair zeros(const TorusGrid& g) { return {ScalarField::zeros(g), ScalarField::zeros(g)}; }
};

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(double s, FieldPair a);

/// Checks the density against the spec's domain; throws std::domain_error.
void require_density_domain(const HamiltonianSpec& spec, const ScalarField& m);

/// The MFG operator: ( -v - H(x,Dv,eta),  eta - div(eta DpH(x,Dv,eta)) - 1 ).
FieldPair apply_operator(const HamiltonianSpec& spec, const FieldPair& w);

/// Infinity norm of apply_operator(w).
double strong_residual_norm(const HamiltonianSpec& spec, const FieldPair& w);

/// Left-hand side of the weak-solution variational inequality, after
/// moving the divergence onto the test pair.
double vi_lhs(const HamiltonianSpec& spec, const FieldPair& test, const FieldPair& cand);

/// Same quantity with the divergence kept on the test side; agrees with
/// vi_lhs up to quadrature roundoff.
double vi_lhs_divergence_form(const HamiltonianSpec& spec, const FieldPair& test, const FieldPair& cand);

/// pair_inner(w1 - w2, A[w1] - A[w2]); nonnegative for monotone specs.
double monotonicity_gap(const HamiltonianSpec& spec, const FieldPair& w1, const FieldPair& w2);

/// Band-limited random test pair: v a random trig polynomial, eta =
/// floor + (random trig polynomial)^2 so eta >= floor > 0.
FieldPair random_test_pair(const TorusGrid& g, int max_freq, double positivity_floor, std::uint64_t seed);

// Pointwise evaluation helpers shared by the solver and linearization.
struct PointwiseHamiltonian {
    ScalarField H;        // H(x, Du, m)
    VectorField DpH;      // D_p H
    ScalarField DmH;      // D_m H
    std::vector<SmallMat> DppH;  // per point
    VectorField DpmH;     // D^2_{pm} H
};

PointwiseHamiltonian evaluate_hamiltonian(const HamiltonianSpec& spec, const ScalarField& m,
                                          const VectorField& Du, bool with_second_derivatives);

SmallVec point_vector(const VectorField& f, std::size_t i);

}  // namespace mfg
