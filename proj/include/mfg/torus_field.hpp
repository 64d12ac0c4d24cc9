#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

namespace mfg {

/// Uniform periodic grid on the unit torus T^d, d in {1,2}.
/// n points per axis, n a power of two >= 8, spacing h = 1/n.
struct TorusGrid {
    int dim = 1;
    int n = 8;
    double h = 1.0 / 8.0;

    std::size_t size() const { return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }

    /// Coordinate of flat index along `axis` (row-major: idx = ix*n + iy).
    double coord(std::size_t flat, int axis) const;

    bool operator==(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
};

TorusGrid make_grid(int dim, int n);

/// Real scalar field sampled at the grid points, row-major.
struct ScalarField {
    TorusGrid grid;
    std::vector<double> values;

    static ScalarField zeros(const TorusGrid& g);
    static ScalarField constant(const TorusGrid& g, double c);
    static ScalarField sample(const TorusGrid& g, const std::function<double(const std::array<double, 2>&)>& f);

    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// d scalar components on a shared grid.
struct VectorField {
    TorusGrid grid;
    std::vector<ScalarField> comps;

    static VectorField zeros(const TorusGrid& g);
};

// Spectral (Fourier collocation) calculus. Exact for trigonometric
// polynomials below the Nyquist frequency; Nyquist mode of the first
// derivative is zeroed.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& g);
ScalarField laplacian(const ScalarField& f);
ScalarField partial_derivative(const ScalarField& f, int axis);

/// Rectangle-rule integral h^d * sum (spectrally accurate on the torus).
double integrate(const ScalarField& f);

/// Pairing of two density/value pairs: integral of (eta*eta~ + v*v~).
double pair_inner(const ScalarField& eta1, const ScalarField& v1,
                  const ScalarField& eta2, const ScalarField& v2);

/// Random real trigonometric polynomial with |k_i| <= max_freq per axis.
ScalarField random_trig_polynomial(const TorusGrid& g, int max_freq, std::mt19937_64& rng, double amplitude = 1.0);

/// CSV dump: header "x,value" (d=1) or "x,y,value" (d=2), row-major.
void write_csv(std::ostream& os, const ScalarField& f);
ScalarField read_csv(std::istream& is, const TorusGrid& g);

}  // namespace mfg
