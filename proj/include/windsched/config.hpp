#pragma once

// JSON run configuration. One file drives every CLI subcommand; sections a
// subcommand does not need may be omitted. Unknown keys are rejected so a
// typo cannot silently fall back to a default. Per-slot model parameters
// (theta, alpha_t, gamma_t, lambda_o) accept either a scalar, which is
// broadcast to all M T1-slots, or an array of length M.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "windsched/harness.hpp"
#include "windsched/market.hpp"
#include "windsched/models.hpp"
#include "windsched/persistent.hpp"

namespace windsched {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error("config: " + m) {}
};

struct SolverOptions {
    int quad_nodes = 64;
    int s_scan_points = 129;
    int fallback_points = 4097;
    int price_grid_points = 2001;  // grid used by --verify price checks
    double condition_a_threshold = 0.01;
    int slot = 1;  // T1-slot targeted by solve-nonpersistent
    MdpOptions mdp;
};

struct SimulateConfig {
    std::string policy_file;
    long n_days = 1000;
    bool sample_from_quadrature = false;
};

struct Config {
    std::uint64_t seed = 1;
    MarketParams market;
    bool has_models = false;
    WindModel wind;
    TraditionalDemandModel trad;
    OpportunisticModel opp;
    SolverOptions solver;
    bool has_experiment = false;
    ExperimentSpec experiment;
    bool has_simulate = false;
    SimulateConfig simulate;
    std::string out_dir = "out";
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
}

inline double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    return j.get<double>();
}

inline double get_num(const json& j, const char* key, double def, const std::string& where) {
    if (!j.contains(key)) return def;
    return as_number(j.at(key), where + "." + key);
}

inline long get_int(const json& j, const char* key, long def, const std::string& where) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<long>();
}

inline bool get_bool(const json& j, const char* key, bool def, const std::string& where) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
    return v.get<bool>();
}

inline std::string get_str(const json& j, const char* key, const std::string& def,
                           const std::string& where) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

// Scalar broadcast or length-M array.
inline std::vector<double> slot_array(const json& j, const char* key, std::size_t M,
                                      const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
    const json& v = j.at(key);
    if (v.is_number()) return std::vector<double>(M, v.get<double>());
    if (v.is_array()) {
        if (v.size() != M)
            throw ConfigError(where + "." + key + " must have length M = " + std::to_string(M));
        std::vector<double> out;
        out.reserve(M);
        for (const json& e : v) out.push_back(as_number(e, where + "." + key + "[]"));
        return out;
    }
    throw ConfigError(where + "." + key + " must be a number or an array");
}

inline std::vector<double> num_array(const json& j, const char* key,
                                     const std::vector<double>& def, const std::string& where) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) out.push_back(as_number(e, where + "." + key + "[]"));
    return out;
}

inline MdpOptions parse_mdp(const json& j) {
    check_keys(j, "solver.mdp",
               {"s_grid", "u_grid", "price_grid", "zeta_family_size", "P_max", "N_max",
                "quad_nodes_w", "quad_nodes_d", "work_budget"});
    MdpOptions m;
    m.s_grid = num_array(j, "s_grid", {}, "solver.mdp");
    m.u_grid = num_array(j, "u_grid", {}, "solver.mdp");
    m.price_grid = num_array(j, "price_grid", {}, "solver.mdp");
    m.zeta_family_size = int(get_int(j, "zeta_family_size", m.zeta_family_size, "solver.mdp"));
    m.P_max = int(get_int(j, "P_max", m.P_max, "solver.mdp"));
    m.N_max = int(get_int(j, "N_max", m.N_max, "solver.mdp"));
    m.quad_nodes_w = int(get_int(j, "quad_nodes_w", m.quad_nodes_w, "solver.mdp"));
    m.quad_nodes_d = int(get_int(j, "quad_nodes_d", m.quad_nodes_d, "solver.mdp"));
    m.work_budget = get_num(j, "work_budget", m.work_budget, "solver.mdp");
    return m;
}

inline Mode parse_mode(const std::string& s) {
    if (s == "two-timescale" || s == "nonpersistent") return Mode::nonpersistent;
    if (s == "persistent") return Mode::persistent;
    if (s == "benchmark") return Mode::benchmark;
    throw ConfigError("experiment.mode must be \"two-timescale\", \"persistent\", or \"benchmark\"");
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& root) {
    using detail::check_keys;
    using detail::get_bool;
    using detail::get_int;
    using detail::get_num;
    using detail::get_str;
    using nlohmann::json;

    check_keys(root, "top level",
               {"seed", "market", "wind", "traditional", "opportunistic", "solver", "experiment",
                "simulate", "output"});
    Config cfg;
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
            throw ConfigError("seed must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }

    if (!root.contains("market")) throw ConfigError("market section is required");
    {
        const json& m = root.at("market");
        check_keys(m, "market", {"c1", "c2", "c_p", "u_cap", "v_cap", "M", "K"});
        cfg.market.c1 = get_num(m, "c1", cfg.market.c1, "market");
        cfg.market.c2 = get_num(m, "c2", cfg.market.c2, "market");
        cfg.market.c_p = get_num(m, "c_p", cfg.market.c_p, "market");
        cfg.market.u_cap = get_num(m, "u_cap", cfg.market.u_cap, "market");
        cfg.market.v_cap = get_num(m, "v_cap", cfg.market.v_cap, "market");
        cfg.market.M = int(get_int(m, "M", 2, "market"));
        cfg.market.K = int(get_int(m, "K", 2, "market"));
        try {
            cfg.market.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    bool any_model = root.contains("wind") || root.contains("traditional") ||
                     root.contains("opportunistic");
    if (any_model) {
        if (!root.contains("wind") || !root.contains("traditional") ||
            !root.contains("opportunistic"))
            throw ConfigError("wind, traditional, and opportunistic sections go together");
        std::size_t M = std::size_t(cfg.market.M);
        const json& w = root.at("wind");
        check_keys(w, "wind", {"theta", "sigma"});
        cfg.wind.theta = detail::slot_array(w, "theta", M, "wind");
        cfg.wind.sigma = get_num(w, "sigma", 0.0, "wind");
        const json& t = root.at("traditional");
        check_keys(t, "traditional", {"alpha_t", "gamma_t", "sigma_t"});
        cfg.trad.alpha_t = detail::slot_array(t, "alpha_t", M, "traditional");
        cfg.trad.gamma_t = detail::slot_array(t, "gamma_t", M, "traditional");
        cfg.trad.sigma_t = get_num(t, "sigma_t", 0.0, "traditional");
        const json& o = root.at("opportunistic");
        check_keys(o, "opportunistic", {"lambda_o", "T2", "gamma_o", "v_min", "E_o"});
        cfg.opp.lambda_o = detail::slot_array(o, "lambda_o", M, "opportunistic");
        cfg.opp.T2 = get_num(o, "T2", 1.0, "opportunistic");
        cfg.opp.gamma_o = get_num(o, "gamma_o", -1.0, "opportunistic");
        cfg.opp.v_min = get_num(o, "v_min", 1.0, "opportunistic");
        cfg.opp.E_o = get_num(o, "E_o", 1.0, "opportunistic");
        try {
            cfg.wind.validate();
            cfg.trad.validate();
            cfg.opp.validate();
            if (!(cfg.opp.v_min <= cfg.market.v_cap))
                throw std::invalid_argument("v_min must not exceed v_cap");
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        cfg.has_models = true;
    }

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        check_keys(s, "solver",
                   {"quad_nodes", "s_scan_points", "fallback_points", "price_grid_points",
                    "condition_a_threshold", "slot", "mdp"});
        cfg.solver.quad_nodes = int(get_int(s, "quad_nodes", cfg.solver.quad_nodes, "solver"));
        cfg.solver.s_scan_points =
            int(get_int(s, "s_scan_points", cfg.solver.s_scan_points, "solver"));
        cfg.solver.fallback_points =
            int(get_int(s, "fallback_points", cfg.solver.fallback_points, "solver"));
        cfg.solver.price_grid_points =
            int(get_int(s, "price_grid_points", cfg.solver.price_grid_points, "solver"));
        cfg.solver.condition_a_threshold =
            get_num(s, "condition_a_threshold", cfg.solver.condition_a_threshold, "solver");
        cfg.solver.slot = int(get_int(s, "slot", cfg.solver.slot, "solver"));
        if (s.contains("mdp")) cfg.solver.mdp = detail::parse_mdp(s.at("mdp"));
        if (cfg.solver.quad_nodes < 1 || cfg.solver.s_scan_points < 3 ||
            cfg.solver.fallback_points < 3 || cfg.solver.price_grid_points < 2)
            throw ConfigError("solver grid sizes out of range");
        if (cfg.solver.slot < 1 || cfg.solver.slot > cfg.market.M)
            throw ConfigError("solver.slot must lie in 1..M");
    }

    if (root.contains("experiment")) {
        const json& e = root.at("experiment");
        check_keys(e, "experiment",
                   {"mode", "compare_benchmark", "gamma_t", "gamma_o", "sigma_t", "v_min", "E_o",
                    "T2", "base_traditional_demand", "wind_sigma_ratio", "reference_price",
                    "wind_penetration", "opp_penetration", "elasticity", "replicates",
                    "persistent_days", "bench_u_points"});
        ExperimentSpec& x = cfg.experiment;
        x.params = cfg.market;
        x.mode = detail::parse_mode(get_str(e, "mode", "two-timescale", "experiment"));
        x.compare_benchmark = get_bool(e, "compare_benchmark", false, "experiment");
        x.gamma_t = get_num(e, "gamma_t", x.gamma_t, "experiment");
        x.gamma_o = get_num(e, "gamma_o", x.gamma_o, "experiment");
        x.sigma_t = get_num(e, "sigma_t", x.sigma_t, "experiment");
        x.v_min = get_num(e, "v_min", x.v_min, "experiment");
        x.E_o = get_num(e, "E_o", x.E_o, "experiment");
        x.T2 = get_num(e, "T2", x.T2, "experiment");
        x.base_traditional_demand =
            get_num(e, "base_traditional_demand", x.base_traditional_demand, "experiment");
        x.wind_sigma_ratio = get_num(e, "wind_sigma_ratio", x.wind_sigma_ratio, "experiment");
        x.condition_a_threshold = cfg.solver.condition_a_threshold;
        x.reference_price = get_num(e, "reference_price", x.reference_price, "experiment");
        x.wind_penetration =
            detail::num_array(e, "wind_penetration", x.wind_penetration, "experiment");
        x.opp_penetration =
            detail::num_array(e, "opp_penetration", x.opp_penetration, "experiment");
        x.elasticity = detail::num_array(e, "elasticity", x.elasticity, "experiment");
        x.replicates = get_int(e, "replicates", x.replicates, "experiment");
        x.persistent_days = get_int(e, "persistent_days", x.persistent_days, "experiment");
        x.bench_u_points = int(get_int(e, "bench_u_points", x.bench_u_points, "experiment"));
        x.seed = cfg.seed;
        x.quad_nodes = cfg.solver.quad_nodes;
        x.mdp = cfg.solver.mdp;
        try {
            x.validate();
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
        cfg.has_experiment = true;
    }

    if (root.contains("simulate")) {
        const json& s = root.at("simulate");
        check_keys(s, "simulate", {"policy_file", "n_days", "sample_from_quadrature"});
        cfg.simulate.policy_file = get_str(s, "policy_file", "", "simulate");
        cfg.simulate.n_days = get_int(s, "n_days", cfg.simulate.n_days, "simulate");
        cfg.simulate.sample_from_quadrature =
            get_bool(s, "sample_from_quadrature", false, "simulate");
        if (cfg.simulate.n_days < 1) throw ConfigError("simulate.n_days must be >= 1");
        cfg.has_simulate = true;
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        check_keys(o, "output", {"dir"});
        cfg.out_dir = get_str(o, "dir", cfg.out_dir, "output");
    }
    return cfg;
}

inline Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("parse error in ") + path + ": " + e.what());
    }
    return parse_config(root);
}

// Full post-default dump; parsing it again yields the same Config. Written
// next to every run's outputs so a result can be reproduced from its
// artifacts alone.
inline nlohmann::json resolved_config(const Config& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["market"] = {{"c1", cfg.market.c1},       {"c2", cfg.market.c2},
                   {"c_p", cfg.market.c_p},     {"u_cap", cfg.market.u_cap},
                   {"v_cap", cfg.market.v_cap}, {"M", cfg.market.M},
                   {"K", cfg.market.K}};
    if (cfg.has_models) {
        j["wind"] = {{"theta", cfg.wind.theta}, {"sigma", cfg.wind.sigma}};
        j["traditional"] = {{"alpha_t", cfg.trad.alpha_t},
                            {"gamma_t", cfg.trad.gamma_t},
                            {"sigma_t", cfg.trad.sigma_t}};
        j["opportunistic"] = {{"lambda_o", cfg.opp.lambda_o},
                              {"T2", cfg.opp.T2},
                              {"gamma_o", cfg.opp.gamma_o},
                              {"v_min", cfg.opp.v_min},
                              {"E_o", cfg.opp.E_o}};
    }
    j["solver"] = {{"quad_nodes", cfg.solver.quad_nodes},
                   {"s_scan_points", cfg.solver.s_scan_points},
                   {"fallback_points", cfg.solver.fallback_points},
                   {"price_grid_points", cfg.solver.price_grid_points},
                   {"condition_a_threshold", cfg.solver.condition_a_threshold},
                   {"slot", cfg.solver.slot},
                   {"mdp",
                    {{"s_grid", cfg.solver.mdp.s_grid},
                     {"u_grid", cfg.solver.mdp.u_grid},
                     {"price_grid", cfg.solver.mdp.price_grid},
                     {"zeta_family_size", cfg.solver.mdp.zeta_family_size},
                     {"P_max", cfg.solver.mdp.P_max},
                     {"N_max", cfg.solver.mdp.N_max},
                     {"quad_nodes_w", cfg.solver.mdp.quad_nodes_w},
                     {"quad_nodes_d", cfg.solver.mdp.quad_nodes_d},
                     {"work_budget", cfg.solver.mdp.work_budget}}}};
    if (cfg.has_experiment) {
        const ExperimentSpec& x = cfg.experiment;
        const char* mode = x.mode == Mode::nonpersistent ? "two-timescale"
                           : x.mode == Mode::persistent  ? "persistent"
                                                         : "benchmark";
        j["experiment"] = {{"mode", mode},
                           {"compare_benchmark", x.compare_benchmark},
                           {"gamma_t", x.gamma_t},
                           {"gamma_o", x.gamma_o},
                           {"sigma_t", x.sigma_t},
                           {"v_min", x.v_min},
                           {"E_o", x.E_o},
                           {"T2", x.T2},
                           {"base_traditional_demand", x.base_traditional_demand},
                           {"wind_sigma_ratio", x.wind_sigma_ratio},
                           {"reference_price", x.reference_price},
                           {"wind_penetration", x.wind_penetration},
                           {"opp_penetration", x.opp_penetration},
                           {"elasticity", x.elasticity},
                           {"replicates", x.replicates},
                           {"persistent_days", x.persistent_days},
                           {"bench_u_points", x.bench_u_points}};
    }
    if (cfg.has_simulate)
        j["simulate"] = {{"policy_file", cfg.simulate.policy_file},
                         {"n_days", cfg.simulate.n_days},
                         {"sample_from_quadrature", cfg.simulate.sample_from_quadrature}};
    j["output"] = {{"dir", cfg.out_dir}};
    return j;
}

}  // namespace windsched
