// Command-line front end. Four subcommands share one JSON config:
//
//   solve-nonpersistent   closed-form day-ahead pair (u*, S*) for one slot
//   solve-persistent      backward-induction policy over the action grids
//   simulate              forward simulation of a stored policy
//   sweep                 Monte-Carlo penetration / elasticity sweep to CSV
//
// Exit codes: 0 success, 1 runtime failure (including --verify mismatches),
// 2 configuration error (bad file, bad values, work-budget refusal).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <windsched/windsched.hpp>

namespace fs = std::filesystem;
using namespace windsched;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;  // overrides output.dir when nonempty
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool verify = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--threads", args.threads, "worker threads for sweeps");
    cmd->add_flag("--verify", args.verify, "run self-checks after the main work");
}

Config load(const CommonArgs& args) {
    Config cfg = load_config_file(args.config_path);
    if (args.seed_set) {
        cfg.seed = args.seed;
        cfg.experiment.seed = args.seed;
    }
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

fs::path prepare_out_dir(const Config& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void dump_resolved_config(const Config& cfg, const fs::path& dir) {
    write_text_file(dir / "resolved_config.json", resolved_config(cfg).dump(2) + "\n");
}

void require_models(const Config& cfg) {
    if (!cfg.has_models)
        throw ConfigError("wind/traditional/opportunistic sections are required here");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// --------------------------------------------------------------------------
// solve-nonpersistent

int cmd_solve_nonpersistent(const CommonArgs& args) {
    Config cfg = load(args);
    require_models(cfg);
    fs::path dir = prepare_out_dir(cfg);
    std::size_t m = std::size_t(cfg.solver.slot);

    double u_star = dayahead_u_star(cfg.market, cfg.trad, m);
    SStarOptions opts;
    opts.quad_nodes = cfg.solver.quad_nodes;
    opts.scan_points = cfg.solver.s_scan_points;
    opts.fallback_points = cfg.solver.fallback_points;
    SStarResult sol = dayahead_S_star(cfg.market, cfg.wind, cfg.trad, cfg.opp, m, u_star, opts);

    double mean_dt = traditional_demand_mean(cfg.trad, m, u_star);
    double p_a = condition_a_prob(cfg.wind, cfg.opp, m, mean_dt);
    double inf = std::numeric_limits<double>::infinity();
    RealtimePrice v_deficit = realtime_price(cfg.market, cfg.opp, m, -1e300);
    RealtimePrice v_surplus = realtime_price(cfg.market, cfg.opp, m, 1e300);

    nlohmann::json out;
    out["slot"] = m;
    out["u_star"] = u_star;
    out["S_star"] = sol.S;
    out["s_prime"] = sol.s_prime;
    out["used_closed_form"] = sol.used_closed_form;
    out["grid_fallback_warning"] = sol.grid_fallback_warning;
    out["condition_a_prob"] = p_a;
    out["condition_a_warning"] = p_a > cfg.solver.condition_a_threshold;
    out["price_surplus"] = v_surplus.v;
    out["price_deficit"] = v_deficit.v;
    out["q_o_at_surplus"] = opportunistic_demand_moments(cfg.opp, m, v_surplus.v).mean;
    out["q_o_at_deficit"] = opportunistic_demand_moments(cfg.opp, m, v_deficit.v).mean;
    write_text_file(dir / "solution.json", out.dump(2) + "\n");
    dump_resolved_config(cfg, dir);

    std::cout << "slot " << m << ": u* = " << fmt(u_star) << ", S* = " << fmt(sol.S)
              << " (s' = " << fmt(sol.s_prime) << ", "
              << (sol.used_closed_form ? "closed form" : "numeric search") << ")\n";
    std::cout << "real-time price range [" << fmt(v_surplus.v) << ", " << fmt(v_deficit.v)
              << "], condition-A probability " << fmt(p_a) << "\n";
    if (sol.grid_fallback_warning)
        std::cout << "warning: procurement objective not unimodal on the coarse scan\n";
    if (p_a > cfg.solver.condition_a_threshold)
        std::cout << "warning: wind may cover all demand more often than the threshold "
                  << fmt(cfg.solver.condition_a_threshold) << "\n";

    if (args.verify) {
        // Closed-form price vs dense-grid argmax of the certainty-equivalent
        // objective over a wide span of leftover energy.
        double q_hi = opportunistic_demand_moments(cfg.opp, m, cfg.opp.v_min).mean;
        double span = std::max(q_hi, 1.0);
        int bad = 0;
        for (int i = 0; i <= 80; ++i) {
            double Y = -0.25 * span + 1.5 * span * double(i) / 80.0;
            double v_cf = realtime_price(cfg.market, cfg.opp, m, Y).v;
            double v_or = realtime_price_oracle(cfg.market, cfg.opp, m, Y,
                                                cfg.solver.price_grid_points);
            double step = (cfg.market.v_cap - cfg.opp.v_min) / (cfg.solver.price_grid_points - 1);
            double ce_cf = realtime_objective_ce(cfg.market, cfg.opp, m, Y, v_cf);
            double ce_or = realtime_objective_ce(cfg.market, cfg.opp, m, Y, v_or);
            if (std::abs(v_cf - v_or) > step + 1e-12 && ce_cf + 1e-9 < ce_or) ++bad;
        }
        // No grid point near s'* may beat the returned objective value.
        double sigma_z =
            std::sqrt(cfg.wind.sigma * cfg.wind.sigma + cfg.trad.sigma_t * cfg.trad.sigma_t);
        double best = f2(cfg.market, cfg.opp, cfg.wind, cfg.trad.sigma_t, m, sol.s_prime,
                         cfg.solver.quad_nodes);
        double width = 4.0 * sigma_z + 0.5 * std::abs(sol.s_prime) + 1.0;
        double tol = 1e-6 * (std::abs(best) + 1.0) + 1e-9;
        int beats = 0;
        for (int i = 0; i <= 64; ++i) {
            double sp = sol.s_prime - width + 2.0 * width * double(i) / 64.0;
            if (f2(cfg.market, cfg.opp, cfg.wind, cfg.trad.sigma_t, m, sp,
                   cfg.solver.quad_nodes) > best + tol)
                ++beats;
        }
        if (bad == 0 && beats == 0) {
            std::cout << "verify: OK (price oracle and procurement re-check)\n";
        } else {
            std::cout << "verify: FAILED (" << bad << " price mismatches, " << beats
                      << " better grid points)\n";
            return 1;
        }
        (void)inf;
    }
    return 0;
}

// --------------------------------------------------------------------------
// solve-persistent

int cmd_solve_persistent(const CommonArgs& args) {
    Config cfg = load(args);
    require_models(cfg);
    if (cfg.solver.mdp.s_grid.empty() || cfg.solver.mdp.u_grid.empty() ||
        cfg.solver.mdp.price_grid.empty())
        throw ConfigError("solver.mdp.{s_grid,u_grid,price_grid} are required");
    fs::path dir = prepare_out_dir(cfg);

    MdpModel model = make_mdp_model(cfg.market, cfg.wind, cfg.trad, cfg.opp, cfg.solver.mdp);
    double work = mdp_work_estimate(model);
    std::cout << "state space: P_max = " << model.opts.P_max << ", N_max = " << model.opts.N_max
              << ", actions = "
              << model.opts.s_grid.size() * model.opts.u_grid.size() * model.zeta_family.size()
              << ", estimated work " << fmt(work) << " ops\n";
    if (work > model.opts.work_budget) {
        std::cerr << "refusing to solve: estimated work " << fmt(work) << " exceeds budget "
                  << fmt(model.opts.work_budget) << "\n";
        return 2;
    }

    PolicyTable table = solve_backward(model);
    fs::path policy_path = dir / "policy.txt";
    write_policy_file(policy_path.string(), table);
    dump_resolved_config(cfg, dir);

    nlohmann::json out;
    out["policy_file"] = policy_path.string();
    out["value_empty_start"] = table.value[0][0];
    out["value_by_carryover"] = table.value[0];
    UpperAction a0 = table.action_at(1, 0);
    out["first_slot_action"] = {{"s", a0.s}, {"u", a0.u}, {"zeta_index", a0.zeta}};
    write_text_file(dir / "solution.json", out.dump(2) + "\n");

    std::cout << "policy written to " << policy_path.string() << "\n";
    std::cout << "expected day profit from empty start: " << fmt(table.value[0][0]) << "\n";

    if (args.verify) {
        PolicyTable back = read_policy_file(policy_path.string());
        std::ostringstream a, b;
        write_policy(a, table);
        write_policy(b, back);
        bool round_trip = a.str() == b.str();
        // Transition rows must be probability vectors.
        double worst = 0.0;
        for (std::size_t m = 1; m <= cfg.market.M; ++m)
            for (double v : table.price_grid)
                for (long pl = 0; pl <= table.P_max; ++pl) {
                    std::vector<double> row = persistent_transition_pmf(cfg.opp, m, pl, v,
                                                                        table.N_max, table.P_max);
                    double sum = 0.0;
                    for (double p : row) sum += p;
                    worst = std::max(worst, std::abs(sum - 1.0));
                }
        if (round_trip && worst <= 1e-9) {
            std::cout << "verify: OK (round trip and kernel rows, max |sum-1| = " << fmt(worst)
                      << ")\n";
        } else {
            std::cout << "verify: FAILED (round_trip = " << round_trip
                      << ", max kernel row error = " << fmt(worst) << ")\n";
            return 1;
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// simulate

int cmd_simulate(const CommonArgs& args) {
    Config cfg = load(args);
    require_models(cfg);
    if (!cfg.has_simulate || cfg.simulate.policy_file.empty())
        throw ConfigError("simulate.policy_file is required");
    fs::path dir = prepare_out_dir(cfg);

    PolicyTable table = read_policy_file(cfg.simulate.policy_file);
    const MarketParams& a = table.params;
    const MarketParams& b = cfg.market;
    if (a.c1 != b.c1 || a.c2 != b.c2 || a.c_p != b.c_p || a.u_cap != b.u_cap ||
        a.v_cap != b.v_cap || a.M != b.M || a.K != b.K)
        throw ConfigError("market parameters in the policy file do not match the config");

    SimulateOptions sopts;
    sopts.n_days = cfg.simulate.n_days;
    sopts.sample_from_quadrature = cfg.simulate.sample_from_quadrature;
    Rng rng(cfg.seed);
    SimulateStats stats = simulate_policy(table, cfg.wind, cfg.trad, cfg.opp, rng, sopts);

    double stderr_ = stats.days > 1 ? std::sqrt(stats.profit_var / stats.days) : 0.0;
    long total_events = stats.events[0] + stats.events[1] + stats.events[2];
    nlohmann::json out;
    out["days"] = stats.days;
    out["profit_mean"] = stats.profit_mean;
    out["profit_stderr"] = stderr_;
    out["revenue_mean"] = stats.revenue_mean;
    out["margin"] = stats.revenue_mean != 0.0 ? stats.profit_mean / stats.revenue_mean : 0.0;
    out["occupancy"] = stats.occupancy;
    out["clamped_lookups"] = stats.clamped_lookups;
    out["event_freq"] = {double(stats.events[0]) / total_events,
                         double(stats.events[1]) / total_events,
                         double(stats.events[2]) / total_events};
    write_text_file(dir / "simulation.json", out.dump(2) + "\n");
    dump_resolved_config(cfg, dir);

    std::cout << "simulated " << stats.days << " days: profit/day " << fmt(stats.profit_mean)
              << " +- " << fmt(stderr_) << ", margin "
              << fmt(stats.revenue_mean != 0.0 ? stats.profit_mean / stats.revenue_mean : 0.0)
              << "\n";
    if (stats.clamped_lookups > 0)
        std::cout << "note: " << stats.clamped_lookups
                  << " policy lookups clamped at P_max; consider a larger P_max\n";

    if (args.verify) {
        Rng rng2(cfg.seed);
        SimulateStats again = simulate_policy(table, cfg.wind, cfg.trad, cfg.opp, rng2, sopts);
        bool same = again.profit_mean == stats.profit_mean &&
                    again.revenue_mean == stats.revenue_mean &&
                    again.clamped_lookups == stats.clamped_lookups;
        if (same) {
            std::cout << "verify: OK (deterministic replay)\n";
        } else {
            std::cout << "verify: FAILED (replay diverged)\n";
            return 1;
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// sweep

int cmd_sweep(const CommonArgs& args) {
    Config cfg = load(args);
    if (!cfg.has_experiment) throw ConfigError("experiment section is required");
    fs::path dir = prepare_out_dir(cfg);

    std::vector<ResultRow> rows = sweep(cfg.experiment, args.threads);
    std::ostringstream csv;
    write_csv(csv, rows);
    write_text_file(dir / "results.csv", csv.str());

    nlohmann::json meta;
    meta["config"] = resolved_config(cfg);
    meta["penetration_mapping"] = penetration_mapping_note();
    meta["rows"] = rows.size();
    write_text_file(dir / "metadata.json", meta.dump(2) + "\n");
    dump_resolved_config(cfg, dir);

    long skipped = 0;
    for (const ResultRow& r : rows)
        if (r.status != "ok") ++skipped;
    std::cout << "wrote " << rows.size() << " rows to " << (dir / "results.csv").string();
    if (skipped) std::cout << " (" << skipped << " skipped)";
    std::cout << "\n";

    if (args.verify) {
        std::vector<ResultRow> again = sweep(cfg.experiment, args.threads);
        std::ostringstream csv2;
        write_csv(csv2, again);
        if (csv2.str() == csv.str()) {
            std::cout << "verify: OK (byte-identical rerun)\n";
        } else {
            std::cout << "verify: FAILED (rerun differs)\n";
            return 1;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-timescale wind dispatch and pricing engine"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* c1 = app.add_subcommand("solve-nonpersistent",
                                      "closed-form day-ahead price and procurement");
    CLI::App* c2 = app.add_subcommand("solve-persistent", "backward-induction policy solve");
    CLI::App* c3 = app.add_subcommand("simulate", "forward-simulate a stored policy");
    CLI::App* c4 = app.add_subcommand("sweep", "Monte-Carlo penetration/elasticity sweep");
    for (CLI::App* c : {c1, c2, c3, c4}) add_common(c, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c1->parsed()) return cmd_solve_nonpersistent(args);
        if (c2->parsed()) return cmd_solve_persistent(args);
        if (c3->parsed()) return cmd_simulate(args);
        if (c4->parsed()) return cmd_sweep(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
