#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>
#include <windsched/config.hpp>

using namespace windsched;
using nlohmann::json;

namespace {

json minimal() {
    return json{{"market",
                 {{"c1", 1.0},
                  {"c2", 2.0},
                  {"c_p", 0.5},
                  {"u_cap", 4.0},
                  {"v_cap", 6.0},
                  {"M", 2},
                  {"K", 2}}}};
}

json with_models() {
    json j = minimal();
    j["wind"] = {{"theta", 3.0}, {"sigma", 0.5}};
    j["traditional"] = {{"alpha_t", 20.0}, {"gamma_t", -0.5}, {"sigma_t", 0.2}};
    j["opportunistic"] =
        {{"lambda_o", 2.0}, {"T2", 1.0}, {"gamma_o", -2.0}, {"v_min", 1.0}, {"E_o", 0.25}};
    return j;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    Config cfg = parse_config(minimal());
    CHECK(cfg.seed == 1);
    CHECK(cfg.out_dir == "out");
    CHECK_FALSE(cfg.has_models);
    CHECK_FALSE(cfg.has_experiment);
    CHECK_FALSE(cfg.has_simulate);
    CHECK(cfg.market.M == 2);
    CHECK(cfg.solver.quad_nodes == 64);
    CHECK(cfg.solver.slot == 1);
    CHECK(cfg.solver.condition_a_threshold == 0.01);
}

TEST_CASE("market section is required and validated") {
    CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
    json j = minimal();
    j["market"]["M"] = 1;  // needs at least two day-ahead slots
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = minimal();
    j["market"]["c2"] = 0.5;  // peaker cheaper than base load
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
    json j = minimal();
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["market"]["c_1"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["solver"] = {{"quadnodes", 16}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["solver"] = {{"mdp", {{"sgrid", json::array()}}}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = with_models();
    j["wind"]["thetaa"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = minimal();
    j["experiment"] = {{"replicate", 10}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("per-slot arrays broadcast from scalars") {
    json j = with_models();
    j["market"]["M"] = 3;
    j["wind"]["theta"] = 5.0;
    j["traditional"]["alpha_t"] = {10.0, 20.0, 30.0};
    Config cfg = parse_config(j);
    REQUIRE(cfg.wind.theta.size() == 3);
    CHECK(cfg.wind.theta[0] == 5.0);
    CHECK(cfg.wind.theta[2] == 5.0);
    CHECK(cfg.trad.alpha_t[1] == 20.0);

    j["traditional"]["alpha_t"] = {10.0, 20.0};  // wrong length
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("model sections go together") {
    json j = minimal();
    j["wind"] = {{"theta", 3.0}, {"sigma", 0.5}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = with_models();
    j["opportunistic"]["v_min"] = 10.0;  // above v_cap
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("seed and slot bounds") {
    json j = minimal();
    j["seed"] = -3;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j["seed"] = 2.5;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j["seed"] = 42;
    CHECK(parse_config(j).seed == 42);

    j = minimal();
    j["solver"] = {{"slot", 3}};  // M = 2
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j["solver"] = {{"slot", 2}};
    CHECK(parse_config(j).solver.slot == 2);
}

TEST_CASE("experiment modes and inherited settings") {
    json j = minimal();
    j["seed"] = 9;
    j["solver"] = {{"quad_nodes", 32}, {"condition_a_threshold", 0.05}};
    j["experiment"] = {{"mode", "two-timescale"}, {"replicates", 50}};
    Config cfg = parse_config(j);
    REQUIRE(cfg.has_experiment);
    CHECK(cfg.experiment.mode == Mode::nonpersistent);
    CHECK(cfg.experiment.replicates == 50);
    CHECK(cfg.experiment.seed == 9);
    CHECK(cfg.experiment.quad_nodes == 32);
    CHECK(cfg.experiment.condition_a_threshold == 0.05);
    CHECK(cfg.experiment.params.v_cap == 6.0);

    j["experiment"]["mode"] = "nonpersistent";  // accepted alias
    CHECK(parse_config(j).experiment.mode == Mode::nonpersistent);
    j["experiment"]["mode"] = "persistent";
    CHECK(parse_config(j).experiment.mode == Mode::persistent);
    j["experiment"]["mode"] = "benchmark";
    CHECK(parse_config(j).experiment.mode == Mode::benchmark);
    j["experiment"]["mode"] = "realtime";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j["experiment"]["mode"] = "two-timescale";
    j["experiment"]["wind_penetration"] = {1.5};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("simulate section") {
    json j = minimal();
    j["simulate"] = {{"policy_file", "out/policy.txt"}, {"n_days", 10}};
    Config cfg = parse_config(j);
    REQUIRE(cfg.has_simulate);
    CHECK(cfg.simulate.policy_file == "out/policy.txt");
    CHECK(cfg.simulate.n_days == 10);
    CHECK_FALSE(cfg.simulate.sample_from_quadrature);

    j["simulate"]["n_days"] = 0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("resolved config round-trips") {
    json j = with_models();
    j["seed"] = 5;
    j["solver"] = {{"quad_nodes", 48},
                   {"mdp", {{"s_grid", {0.5, 1.0}}, {"price_grid", {1.0, 6.0}}, {"P_max", 4}}}};
    j["experiment"] = {{"mode", "persistent"},
                       {"wind_penetration", {0.1, 0.2}},
                       {"elasticity", {-1.5, -2.0}},
                       {"replicates", 100}};
    j["simulate"] = {{"policy_file", "p.txt"}};
    j["output"] = {{"dir", "results"}};

    Config cfg1 = parse_config(j);
    json d1 = resolved_config(cfg1);
    Config cfg2 = parse_config(d1);
    json d2 = resolved_config(cfg2);
    CHECK(d1 == d2);
    CHECK(d1.dump(2) == d2.dump(2));
    CHECK(d1["output"]["dir"] == "results");
    CHECK(d1["solver"]["mdp"]["P_max"] == 4);
    CHECK(d1["experiment"]["mode"] == "persistent");
}

TEST_CASE("config files load with parse errors mapped to ConfigError") {
    std::string good_path = "test_config_good.json";
    std::string bad_path = "test_config_bad.json";
    {
        std::ofstream out(good_path);
        out << minimal().dump(2);
    }
    {
        std::ofstream out(bad_path);
        out << "{ not json";
    }
    Config cfg = load_config_file(good_path);
    CHECK(cfg.market.c2 == 2.0);
    CHECK_THROWS_AS(load_config_file(bad_path), ConfigError);
    CHECK_THROWS_AS(load_config_file("does_not_exist.json"), ConfigError);
    std::remove(good_path.c_str());
    std::remove(bad_path.c_str());
}
