#include "mfg/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace mfg {

namespace {

using nlohmann::json;

double read_exponent(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_string()) {
        if (j[key] == "inf") return kInf;
        throw std::invalid_argument(std::string("bad exponent value for ") + key);
    }
    return j[key].get<double>();
}

CouplingG parse_coupling(const json& j) {
    CouplingG g;
    const std::string type = j.value("type", "power_law");
    if (type == "power_law") {
        g.kind = CouplingG::Kind::power_law;
        g.c = j.value("c", 1.0);
        g.exponent = j.value("exponent", 1.0);
    } else if (type == "affine") {
        g.kind = CouplingG::Kind::affine;
        g.k0 = j.value("k0", 0.0);
        g.k1 = j.value("k1", 1.0);
    } else {
        throw std::invalid_argument("unknown coupling type: " + type);
    }
    return g;
}

json coupling_to_json(const CouplingG& g) {
    if (g.kind == CouplingG::Kind::power_law)
        return {{"type", "power_law"}, {"c", g.c}, {"exponent", g.exponent}};
    return {{"type", "affine"}, {"k0", g.k0}, {"k1", g.k1}};
}

HamiltonianSpec parse_hamiltonian(const json& j) {
    HamiltonianSpec spec;
    const std::string family = j.value("family", "power");
    if (family == "power")
        spec.family = HamiltonianFamily::power;
    else if (family == "congestion")
        spec.family = HamiltonianFamily::congestion;
    else
        throw std::invalid_argument("unknown hamiltonian family: " + family);
    spec.gamma = j.value("gamma", 2.0);
    spec.alpha = j.value("alpha", 1.0);
    if (j.contains("coupling_g")) spec.coupling_g = parse_coupling(j["coupling_g"]);
    if (j.contains("potential_V")) {
        for (const auto& mj : j["potential_V"]) {
            TrigMode mode;
            const auto& k = mj.at("k");
            mode.k[0] = k.at(0).get<int>();
            if (k.size() > 1) mode.k[1] = k.at(1).get<int>();
            mode.cos_coef = mj.value("cos", 0.0);
            mode.sin_coef = mj.value("sin", 0.0);
            spec.potential_V.push_back(mode);
        }
    }
    const std::string domain =
        j.value("density_domain", spec.family == HamiltonianFamily::congestion ? "positive" : "nonnegative");
    spec.density_domain = domain == "positive" ? DensityDomain::positive : DensityDomain::nonnegative;
    spec.validate();
    return spec;
}

json hamiltonian_to_json(const HamiltonianSpec& spec) {
    json j;
    j["family"] = spec.family == HamiltonianFamily::power ? "power" : "congestion";
    j["gamma"] = spec.gamma;
    if (spec.family == HamiltonianFamily::congestion) j["alpha"] = spec.alpha;
    if (spec.family == HamiltonianFamily::power) j["coupling_g"] = coupling_to_json(spec.coupling_g);
    json modes = json::array();
    for (const auto& m : spec.potential_V) {
        json mj;
        mj["k"] = json::array({m.k[0], m.k[1]});
        mj["cos"] = m.cos_coef;
        mj["sin"] = m.sin_coef;
        modes.push_back(mj);
    }
    j["potential_V"] = modes;
    j["density_domain"] = spec.density_domain == DensityDomain::positive ? "positive" : "nonnegative";
    return j;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("grid")) {
        cfg.grid_d = j["grid"].value("d", 1);
        cfg.grid_n = j["grid"].value("n", 64);
    }
    if (j.contains("hamiltonian")) cfg.hamiltonian = parse_hamiltonian(j["hamiltonian"]);
    if (j.contains("exponents")) {
        const auto& e = j["exponents"];
        cfg.exponents.r = read_exponent(e, "r", 4.0);
        cfg.exponents.gamma = read_exponent(e, "gamma", 4.0);
        cfg.exponents.r1 = read_exponent(e, "r1", 8.0);
        cfg.exponents.gamma1 = read_exponent(e, "gamma1", 8.0);
    }
    cfg.exponents.d = cfg.grid_d;
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (s.contains("visc_schedule")) cfg.solver.visc_schedule = s["visc_schedule"].get<std::vector<double>>();
        cfg.solver.newton_tol = s.value("newton_tol", cfg.solver.newton_tol);
        cfg.solver.max_newton = s.value("max_newton", cfg.solver.max_newton);
        cfg.solver.final_tol = s.value("final_tol", cfg.solver.final_tol);
    }
    if (j.contains("certify")) {
        const auto& c = j["certify"];
        cfg.certify.n_tests = c.value("n_tests", cfg.certify.n_tests);
        cfg.certify.seed = c.value("seed", cfg.certify.seed);
        cfg.certify.tol_pos = c.value("tol_pos", cfg.certify.tol_pos);
        cfg.certify.vi_tol = c.value("vi_tol", cfg.certify.vi_tol);
        cfg.certify.c0_min = c.value("c0_min", cfg.certify.c0_min);
        cfg.certify.n_zeta = c.value("n_zeta", cfg.certify.n_zeta);
        cfg.certify.q_samples = c.value("q_samples", cfg.certify.q_samples);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json j;
    j["grid"] = {{"d", cfg.grid_d}, {"n", cfg.grid_n}};
    j["hamiltonian"] = hamiltonian_to_json(cfg.hamiltonian);
    j["exponents"] = {{"r", cfg.exponents.r},
                      {"gamma", cfg.exponents.gamma},
                      {"r1", cfg.exponents.r1},
                      {"gamma1", cfg.exponents.gamma1}};
    j["solver"] = {{"visc_schedule", cfg.solver.visc_schedule},
                   {"newton_tol", cfg.solver.newton_tol},
                   {"max_newton", cfg.solver.max_newton},
                   {"final_tol", cfg.solver.final_tol}};
    j["certify"] = {{"n_tests", cfg.certify.n_tests}, {"seed", cfg.certify.seed},
                    {"tol_pos", cfg.certify.tol_pos}, {"vi_tol", cfg.certify.vi_tol},
                    {"c0_min", cfg.certify.c0_min},   {"n_zeta", cfg.certify.n_zeta},
                    {"q_samples", cfg.certify.q_samples}};
    return j;
}

}  // namespace mfg
