#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "mfg/adjoint.hpp"
#include "mfg/certify.hpp"
#include "mfg/config.hpp"
#include "mfg/linearize.hpp"
#include "mfg/strong_solver.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

py::array_t<double> field_to_array(const mfg::ScalarField& f) {
    if (f.grid.dim == 1) {
        py::array_t<double> out(static_cast<py::ssize_t>(f.grid.n));
        std::copy(f.values.begin(), f.values.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out({static_cast<py::ssize_t>(f.grid.n), static_cast<py::ssize_t>(f.grid.n)});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

mfg::ScalarField array_to_field(const mfg::TorusGrid& grid, py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (static_cast<std::size_t>(arr.size()) != grid.size())
        throw std::invalid_argument("field size does not match the grid");
    mfg::ScalarField f = mfg::ScalarField::zeros(grid);
    std::copy(arr.data(), arr.data() + arr.size(), f.values.begin());
    return f;
}

mfg::RunConfig config_from_str(const std::string& text) { return mfg::parse_config(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_mfgcert, mod) {
    mod.doc() = "stationary mean-field-game solver and uniqueness certifier";

    mod.def("solve", [](const std::string& config) {
        const mfg::RunConfig cfg = config_from_str(config);
        const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
        auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
        py::dict out;
        out["m"] = field_to_array(w.m);
        out["u"] = field_to_array(w.u);
        out["residual"] = rep.residual;
        out["c0_hat"] = rep.c0_hat;
        out["converged"] = rep.converged;
        return out;
    }, py::arg("config"), "Solve the stationary system for the configuration (JSON text).");

    mod.def("linearize", [](const std::string& config) {
        const mfg::RunConfig cfg = config_from_str(config);
        const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
        auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
        if (!rep.converged) throw std::runtime_error("solver did not converge");
        const mfg::LinearizationCoeffs coeffs = mfg::assemble_coeffs(cfg.hamiltonian, w);
        const mfg::A3monReport a3 = mfg::check_A3mon(cfg.hamiltonian, w);
        py::dict out;
        mfg::ScalarField kappa = mfg::ScalarField::zeros(grid);
        kappa.values = coeffs.kappa;
        mfg::ScalarField a = mfg::ScalarField::zeros(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) a.values[i] = coeffs.a[i];
        out["kappa"] = field_to_array(kappa);
        out["a"] = field_to_array(a);
        out["sigma"] = field_to_array(coeffs.sigma);
        out["tau"] = coeffs.tau;
        out["lambda_min"] = a3.global_min;
        return out;
    }, py::arg("config"));

    mod.def("adjoint_solve", [](const std::string& config, py::array_t<double> zeta, double upsilon0) {
        const mfg::RunConfig cfg = config_from_str(config);
        const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
        auto [w, rep] = mfg::solve_strong(cfg.hamiltonian, grid, cfg.solver);
        if (!rep.converged) throw std::runtime_error("solver did not converge");
        mfg::AdjointProblem problem;
        problem.coeffs = mfg::assemble_coeffs(cfg.hamiltonian, w);
        for (auto& Ai : problem.coeffs.A) Ai = mfg::SmallMat(Ai.transpose());
        problem.zeta = array_to_field(grid, zeta);
        problem.upsilon0 = upsilon0;
        auto [vbar, arep] = mfg::solve_adjoint(problem);
        py::dict out;
        out["vbar"] = field_to_array(vbar);
        out["residual"] = arep.residual;
        out["norm_X"] = arep.norm_X_solution;
        out["kernel_suspected"] = arep.kernel_suspected;
        return out;
    }, py::arg("config"), py::arg("zeta"), py::arg("upsilon0") = 2.0);

    mod.def("certify", [](const std::string& config) {
        const mfg::Certificate cert = mfg::certify(config_from_str(config));
        return json_to_py(mfg::certificate_to_json(cert));
    }, py::arg("config"), "Run the full hypothesis-check pipeline; returns the certificate as a dict.");

    mod.def("check_exponents", [](double r, double gamma, double r1, double gamma1, int d) {
        const mfg::ExponentProfile prof{r, gamma, r1, gamma1, d};
        prof.validate();
        const mfg::IntAGate intA = mfg::gate_intA(prof);
        py::dict out;
        out["a4"] = mfg::gate_a4(prof);
        out["a3"] = mfg::gate_a3(prof);
        out["intA"] = intA.pass;
        if (intA.pass)
            out["q"] = py::make_tuple(intA.q.q1, intA.q.q2, intA.q.q3, intA.q.q4);
        return out;
    }, py::arg("r"), py::arg("gamma"), py::arg("r1"), py::arg("gamma1"), py::arg("d"));

    mod.def("congestion_alpha_max", &mfg::congestion_alpha_max, py::arg("gamma"));

    mod.def("monotonicity_probe", [](const std::string& config, int samples, std::uint64_t seed) {
        const mfg::RunConfig cfg = config_from_str(config);
        const mfg::TorusGrid grid = mfg::make_grid(cfg.grid_d, cfg.grid_n);
        std::vector<double> gaps;
        gaps.reserve(samples);
        for (int s = 0; s < samples; ++s) {
            const mfg::FieldPair lhs = mfg::random_test_pair(grid, grid.n / 4, 0.2, seed + 2 * s);
            const mfg::FieldPair rhs = mfg::random_test_pair(grid, grid.n / 4, 0.2, seed + 2 * s + 1);
            gaps.push_back(mfg::monotonicity_gap(cfg.hamiltonian, lhs, rhs));
        }
        return gaps;
    }, py::arg("config"), py::arg("samples") = 50, py::arg("seed") = 42);
}
