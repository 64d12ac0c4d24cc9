#include "mfg/torus_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mfg {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

// Integer wave number of DFT bin j on an n-point axis.
int wave_number(int j, int n) { return j <= n / 2 ? j : j - n; }

// Applies a spectral multiplier to f and returns the real part of the
// inverse transform. The multiplier receives the integer wave vector.
std::vector<double> spectral_filter(const ScalarField& f,
                                    const std::function<std::complex<double>(int, int)>& symbol) {
    const int n = f.grid.n;
    const int d = f.grid.dim;
    const std::size_t N = f.grid.size();

    std::vector<std::complex<double>> buf(N);
    for (std::size_t i = 0; i < N; ++i) buf[i] = f.values[i];

    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair plans;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (d == 1) {
            plans.fwd = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
            plans.bwd = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            plans.fwd = fftw_plan_dft_2d(n, n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
            plans.bwd = fftw_plan_dft_2d(n, n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }
    fftw_execute(plans.fwd);

    if (d == 1) {
        for (int j = 0; j < n; ++j) buf[j] *= symbol(wave_number(j, n), 0);
    } else {
        for (int jx = 0; jx < n; ++jx)
            for (int jy = 0; jy < n; ++jy)
                buf[static_cast<std::size_t>(jx) * n + jy] *= symbol(wave_number(jx, n), wave_number(jy, n));
    }

    fftw_execute(plans.bwd);

    std::vector<double> out(N);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = buf[i].real() * scale;
    return out;
}

void require_finite(const ScalarField& f, const char* what) {
    if (!f.all_finite()) throw std::invalid_argument(std::string("non-finite values in ") + what);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double TorusGrid::coord(std::size_t flat, int axis) const {
    if (dim == 1) return static_cast<double>(flat) * h;
    const std::size_t ix = flat / static_cast<std::size_t>(n);
    const std::size_t iy = flat % static_cast<std::size_t>(n);
    return (axis == 0 ? static_cast<double>(ix) : static_cast<double>(iy)) * h;
}

TorusGrid make_grid(int dim, int n) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("unsupported dimension (expected 1 or 2)");
    if (n < 8 || !is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two >= 8");
    TorusGrid g;
    g.dim = dim;
    g.n = n;
    g.h = 1.0 / static_cast<double>(n);
    return g;
}

ScalarField ScalarField::zeros(const TorusGrid& g) { return {g, std::vector<double>(g.size(), 0.0)}; }

ScalarField ScalarField::constant(const TorusGrid& g, double c) { return {g, std::vector<double>(g.size(), c)}; }

ScalarField ScalarField::sample(const TorusGrid& g,
                                const std::function<double(const std::array<double, 2>&)>& f) {
    ScalarField out = zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::array<double, 2> x{g.coord(i, 0), g.dim == 2 ? g.coord(i, 1) : 0.0};
        out.values[i] = f(x);
    }
    return out;
}

double ScalarField::min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::fmin(m, v);
    return m;
}

double ScalarField::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::fmax(m, v);
    return m;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::fmax(m, std::fabs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    if (!(grid == o.grid)) throw std::invalid_argument("grid mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    if (!(grid == o.grid)) throw std::invalid_argument("grid mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
    ScalarField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
    return out;
}

VectorField VectorField::zeros(const TorusGrid& g) {
    VectorField out;
    out.grid = g;
    for (int a = 0; a < g.dim; ++a) out.comps.push_back(ScalarField::zeros(g));
    return out;
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
    require_finite(f, "partial_derivative");
    const int n = f.grid.n;
    auto symbol = [axis, n](int kx, int ky) -> std::complex<double> {
        const int k = axis == 0 ? kx : ky;
        if (k == n / 2 || k == -n / 2) return {0.0, 0.0};  // Nyquist mode has no odd derivative
        return {0.0, kTwoPi * k};
    };
    return {f.grid, spectral_filter(f, symbol)};
}

VectorField gradient(const ScalarField& f) {
    VectorField out;
    out.grid = f.grid;
    for (int a = 0; a < f.grid.dim; ++a) out.comps.push_back(partial_derivative(f, a));
    return out;
}

ScalarField divergence(const VectorField& g) {
    ScalarField out = ScalarField::zeros(g.grid);
    for (int a = 0; a < g.grid.dim; ++a) out += partial_derivative(g.comps[a], a);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    require_finite(f, "laplacian");
    auto symbol = [](int kx, int ky) -> std::complex<double> {
        const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
        return {-kTwoPi * kTwoPi * k2, 0.0};
    };
    return {f.grid, spectral_filter(f, symbol)};
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    const double hd = f.grid.dim == 1 ? f.grid.h : f.grid.h * f.grid.h;
    return s * hd;
}

double pair_inner(const ScalarField& eta1, const ScalarField& v1,
                  const ScalarField& eta2, const ScalarField& v2) {
    if (!(eta1.grid == v1.grid) || !(eta1.grid == eta2.grid) || !(eta1.grid == v2.grid))
        throw std::invalid_argument("grid mismatch in pair_inner");
    return integrate(hadamard(eta1, eta2)) + integrate(hadamard(v1, v2));
}

ScalarField random_trig_polynomial(const TorusGrid& g, int max_freq, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    ScalarField out = ScalarField::zeros(g);
    if (g.dim == 1) {
        for (int k = 1; k <= max_freq; ++k) {
            const double a = coef(rng), b = coef(rng);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.coord(i, 0);
                out.values[i] += a * std::cos(kTwoPi * k * x) + b * std::sin(kTwoPi * k * x);
            }
        }
    } else {
        for (int kx = 0; kx <= max_freq; ++kx) {
            for (int ky = (kx == 0 ? 1 : -max_freq); ky <= max_freq; ++ky) {
                const double a = coef(rng), b = coef(rng);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double ph = kTwoPi * (kx * g.coord(i, 0) + ky * g.coord(i, 1));
                    out.values[i] += a * std::cos(ph) + b * std::sin(ph);
                }
            }
        }
    }
    const double scale = amplitude / std::fmax(1.0, out.max_abs());
    out *= scale;
    return out;
}

void write_csv(std::ostream& os, const ScalarField& f) {
    os << (f.grid.dim == 1 ? "x,value\n" : "x,y,value\n");
    os.precision(17);
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        os << f.grid.coord(i, 0);
        if (f.grid.dim == 2) os << ',' << f.grid.coord(i, 1);
        os << ',' << f.values[i] << '\n';
    }
}

ScalarField read_csv(std::istream& is, const TorusGrid& g) {
    ScalarField out = ScalarField::zeros(g);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
    std::size_t i = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (i >= g.size()) throw std::runtime_error("CSV has more rows than grid points");
        const auto pos = line.rfind(',');
        if (pos == std::string::npos) throw std::runtime_error("malformed CSV row: " + line);
        out.values[i++] = std::stod(line.substr(pos + 1));
    }
    if (i != g.size()) throw std::runtime_error("CSV row count does not match grid");
    return out;
}

}  // namespace mfg
