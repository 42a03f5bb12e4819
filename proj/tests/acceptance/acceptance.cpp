// Acceptance gate: one self-contained check per shipping criterion, each
// printing a single PASS or FAIL line. Usage:
//
//   windsched_acceptance [--criterion N] [--all] [--cli PATH]
//
// The determinism criterion drives the installed CLI binary, so its path
// must be supplied with --cli when criterion 8 runs.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <windsched/windsched.hpp>

#include "support/trend.hpp"

using namespace windsched;
namespace fs = std::filesystem;

namespace {

bool report(int n, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Real-time price closed form vs. certainty-equivalent grid argmax.

bool criterion1() {
    Rng rng(101);
    const int n_configs = 220;
    const int grid_points = 2001;
    int checks = 0;
    for (int cfg = 0; cfg < n_configs; ++cfg) {
        MarketParams p;
        p.c1 = rng.uniform(0.3, 3.0);
        p.c2 = p.c1 * rng.uniform(1.1, 3.0);
        p.c_p = rng.uniform(0.0, 2.0);
        p.u_cap = rng.uniform(1.0, 8.0);
        p.v_cap = rng.uniform(1.0, 12.0);
        p.M = 2;
        p.K = 2;
        OpportunisticModel opp;
        opp.lambda_o = {rng.uniform(0.1, 25.0), rng.uniform(0.1, 25.0)};
        opp.T2 = rng.uniform(0.25, 3.0);
        opp.gamma_o = rng.uniform(-4.0, -0.2);
        opp.v_min = rng.uniform(0.1, 0.8 * p.v_cap);
        opp.E_o = rng.uniform(0.05, 1.5);
        p.validate();
        opp.validate();

        double step = (p.v_cap - opp.v_min) / double(grid_points - 1);
        double q_top = opportunistic_demand_moments(opp, 1, opp.v_min).mean;
        double ys[] = {-2.0 * q_top - 1.0, -0.3 * q_top, 0.0,      0.2 * q_top + 1e-6,
                       0.5 * q_top,        0.9 * q_top,  1.5 * q_top + 0.5};
        for (double Y : ys) {
            double v_cf = realtime_price(p, opp, 1, Y).v;
            double v_or = realtime_price_oracle(p, opp, 1, Y, grid_points);
            ++checks;
            if (std::abs(v_cf - v_or) <= step + 1e-12) continue;
            // Non-unique argmax (plateaus at the clamps): accept any price
            // whose objective ties the grid winner.
            double ce_cf = realtime_objective_ce(p, opp, 1, Y, v_cf);
            double ce_or = realtime_objective_ce(p, opp, 1, Y, v_or);
            if (ce_cf >= ce_or - 1e-9 * std::max(1.0, std::abs(ce_or))) continue;
            return report(1, false,
                          "config " + std::to_string(cfg) + " Y=" + fmt(Y) + ": closed form " +
                              fmt(v_cf) + " vs grid " + fmt(v_or) + " (step " + fmt(step) +
                              "), objective " + fmt(ce_cf) + " < " + fmt(ce_or));
        }
    }
    return report(1, true,
                  "real-time price matches the " + std::to_string(grid_points) +
                      "-point grid argmax on " + std::to_string(n_configs) + " configs (" +
                      std::to_string(checks) + " price checks)");
}

// ---------------------------------------------------------------------------
// 2. Day-ahead closed forms vs. numeric maximizers of f1 and f2.

bool criterion2() {
    Rng rng(202);
    const int n_configs = 60;
    for (int cfg = 0; cfg < n_configs; ++cfg) {
        bool no_opportunistic = cfg % 6 == 5;
        MarketParams p;
        p.c1 = rng.uniform(0.3, 2.0);
        p.c2 = p.c1 * rng.uniform(1.2, 3.0);
        // The quantile form needs the fee at or below the day-ahead cost;
        // with no arrivals at all the price never matters, so any fee works.
        p.c_p = no_opportunistic ? p.c1 * rng.uniform(0.5, 2.0) : p.c1 * rng.uniform(0.05, 0.95);
        p.u_cap = rng.uniform(1.5, 8.0);
        p.v_cap = rng.uniform(2.0, 12.0);
        p.M = 2;
        p.K = 2;
        double gamma_t = rng.uniform(-3.5, -0.2);
        double base_d = rng.uniform(4.0, 40.0);

        TraditionalDemandModel trad;
        trad.gamma_t = {gamma_t, gamma_t};
        trad.alpha_t = {1.0, 1.0};
        trad.sigma_t = rng.uniform(0.0, 0.25) * base_d;
        double u_cf = dayahead_u_star(p, trad, 1);
        trad.alpha_t = {base_d / std::pow(u_cf, gamma_t), base_d / std::pow(u_cf, gamma_t)};

        WindModel wind;
        double theta = rng.uniform(0.0, 0.5) * base_d;
        wind.theta = {theta, theta};
        wind.sigma = rng.uniform(0.0, 0.4) * theta;

        // The quantile closed form covers inelastic opportunistic demand and,
        // for any elasticity, the no-opportunistic degenerate case. Exercise
        // both branches, including the boundary exponent.
        OpportunisticModel opp;
        opp.lambda_o = no_opportunistic
                           ? std::vector<double>{0.0, 0.0}
                           : std::vector<double>{rng.uniform(0.2, 10.0), rng.uniform(0.2, 10.0)};
        opp.T2 = 1.0;
        opp.gamma_o = no_opportunistic ? rng.uniform(-3.0, -0.3)
                      : cfg % 7 == 3   ? -1.0
                                       : rng.uniform(-0.95, -0.05);
        opp.v_min = rng.uniform(0.2, 0.7 * p.v_cap);
        opp.E_o = rng.uniform(0.05, 1.0);
        p.validate();
        trad.validate();
        wind.validate();
        opp.validate();

        // u*: refine the grid argmax of f1 by golden section, then compare.
        auto f1_at = [&](double u) { return f1(p, trad, 1, u); };
        const int u_grid = 2001;
        double u_lo_lim = 1e-3 * p.c1;
        double best_u = u_lo_lim;
        double best_f = f1_at(best_u);
        for (int i = 0; i < u_grid; ++i) {
            double u = u_lo_lim + (p.u_cap - u_lo_lim) * double(i) / (u_grid - 1);
            double f = f1_at(u);
            if (f > best_f) {
                best_f = f;
                best_u = u;
            }
        }
        double span = (p.u_cap - u_lo_lim) / (u_grid - 1);
        double lo = std::max(u_lo_lim, best_u - span), hi = std::min(p.u_cap, best_u + span);
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
        double fx1 = f1_at(x1), fx2 = f1_at(x2);
        for (int it = 0; it < 120; ++it) {
            if (fx1 < fx2) {
                lo = x1;
                x1 = x2;
                fx1 = fx2;
                x2 = lo + ratio * (hi - lo);
                fx2 = f1_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                fx2 = fx1;
                x1 = hi - ratio * (hi - lo);
                fx1 = f1_at(x1);
            }
        }
        double u_num = 0.5 * (lo + hi);
        double f_num = std::max(fx1, fx2);
        bool cap_cf = u_cf == p.u_cap;
        bool cap_num = u_num >= p.u_cap * (1.0 - 1e-6);
        if (cap_cf != cap_num)
            return report(2, false,
                          "config " + std::to_string(cfg) + ": u* branch mismatch, closed " +
                              fmt(u_cf) + " vs numeric " + fmt(u_num));
        if (!(f1_at(u_cf) >= f_num - 1e-9))
            return report(2, false,
                          "config " + std::to_string(cfg) + ": f1(u*) = " + fmt(f1_at(u_cf)) +
                              " below numeric max " + fmt(f_num));

        // S*: compare against a fine scan of f2 over the feasible range. The
        // shortfall kink gives quadrature-f2 an O(1/n) ripple that moves with
        // s'; 1024 nodes push it to ~1e-4, and the value fallback below is
        // sized to that.
        SStarResult sstar = dayahead_S_star(p, wind, trad, opp, 1, u_cf);
        if (!sstar.used_closed_form)
            return report(2, false,
                          "config " + std::to_string(cfg) + ": expected the closed-form branch");
        double mean_dt = traditional_demand_mean(trad, 1, u_cf);
        double sp_cf = sstar.S / p.K - mean_dt;  // constrained maximizer of f2
        double sigma_tot = std::sqrt(wind.sigma * wind.sigma + trad.sigma_t * trad.sigma_t);
        double q_top = opportunistic_demand_moments(opp, 1, opp.v_min).mean;
        double span_s = 6.0 * sigma_tot + q_top + std::abs(sp_cf) + 2.0;
        const int s_grid = 321;
        const int s_nodes = 1024;
        double s_lo = std::max(-mean_dt, sp_cf - span_s), s_hi = sp_cf + span_s;
        double sp_num = s_lo;
        double f2_num = f2(p, opp, wind, trad.sigma_t, 1, s_lo, s_nodes);
        for (int i = 1; i < s_grid; ++i) {
            double sp = s_lo + (s_hi - s_lo) * double(i) / (s_grid - 1);
            double f = f2(p, opp, wind, trad.sigma_t, 1, sp, s_nodes);
            if (f > f2_num) {
                f2_num = f;
                sp_num = sp;
            }
        }
        double s_step = (s_hi - s_lo) / (s_grid - 1);
        if (std::abs(sp_num - sp_cf) > s_step + 1e-12) {
            double f2_cf = f2(p, opp, wind, trad.sigma_t, 1, sp_cf, s_nodes);
            if (!(f2_cf >= f2_num - 5e-4 * std::max(1.0, std::abs(f2_num))))
                return report(2, false,
                              "config " + std::to_string(cfg) + ": S* off-grid, s' closed " +
                                  fmt(sp_cf) + " vs numeric " + fmt(sp_num) + " (step " +
                                  fmt(s_step) + "), f2 " + fmt(f2_cf) + " < " + fmt(f2_num));
        }
    }
    return report(2, true,
                  "day-ahead price and procurement match numeric maximizers on " +
                      std::to_string(n_configs) + " configs");
}

// ---------------------------------------------------------------------------
// 3. Expected-profit closed form vs. Monte Carlo of the realized reduction.

bool criterion3() {
    Rng rng(303);
    const int n_configs = 50;
    const long draws = 100000;
    for (int cfg = 0; cfg < n_configs; ++cfg) {
        MarketParams p;
        p.c1 = rng.uniform(0.3, 2.0);
        p.c2 = p.c1 * rng.uniform(1.2, 3.0);
        p.c_p = rng.uniform(0.0, 1.5);
        p.u_cap = rng.uniform(1.5, 8.0);
        p.v_cap = rng.uniform(2.0, 12.0);
        p.M = 2;
        p.K = 2;
        OpportunisticModel opp;
        opp.lambda_o = {rng.uniform(0.2, 20.0), rng.uniform(0.2, 20.0)};
        opp.T2 = 1.0;
        opp.gamma_o = rng.uniform(-3.5, -0.3);
        opp.v_min = rng.uniform(0.2, 0.7 * p.v_cap);
        opp.E_o = rng.uniform(0.05, 1.0);
        p.validate();
        opp.validate();

        DayAheadDecision dec{rng.uniform(0.0, 20.0), rng.uniform(0.5, p.u_cap)};
        LowerState st{rng.uniform(0.0, 10.0), rng.uniform(0.0, 15.0)};
        double v = rng.uniform(opp.v_min, p.v_cap);
        double closed = realtime_profit_reduced(p, opp, 1, dec, st, v).value;

        DemandMoments mom = opportunistic_demand_moments(opp, 1, v);
        double sd = std::sqrt(mom.variance);
        double s = dec.s(p);
        double Y = s + st.W - st.D_t;
        double base = dec.u * st.D_t - p.c1 * s + p.c2 * Y;
        double c = p.composite_cost();
        double sum = 0.0, sumsq = 0.0;
        for (long i = 0; i < draws; ++i) {
            double d = rng.normal(mom.mean, sd);
            double val = base + (v - p.c2) * d - c * std::max(Y - d, 0.0);
            sum += val;
            sumsq += val * val;
        }
        double mean = sum / draws;
        double se = std::sqrt(std::max(0.0, (sumsq - sum * sum / draws) / (draws - 1)) / draws);
        if (!(std::abs(closed - mean) <= 3.0 * se + 1e-9))
            return report(3, false,
                          "config " + std::to_string(cfg) + ": closed " + fmt(closed) + " vs MC " +
                              fmt(mean) + " +- " + fmt(se) + " at " + std::to_string(draws) +
                              " draws");
    }
    return report(3, true,
                  "expected-profit closed form within 3 sigma of Monte Carlo on " +
                      std::to_string(n_configs) + " configs");
}

// ---------------------------------------------------------------------------
// 4. Backward induction vs. exhaustive enumeration of the nested two-level
// formulation, with independently coded counting kernels.

namespace enum4 {

std::vector<double> poisson_pmf(double kappa, int n_max) {
    std::vector<double> pmf(n_max + 1, 0.0);
    if (kappa == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    double term = std::exp(-kappa);
    double total = 0.0;
    for (int n = 0; n < n_max; ++n) {
        pmf[n] = term;
        total += term;
        term *= kappa / (n + 1);
    }
    pmf[n_max] = std::max(0.0, 1.0 - total);
    return pmf;
}

std::vector<double> binom_pmf(int n, double prob) {
    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = 1.0;
    for (int t = 0; t < n; ++t) {
        for (int k = t + 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - prob) + pmf[k - 1] * prob;
        pmf[0] *= 1.0 - prob;
    }
    return pmf;
}

struct Kernel {
    std::vector<double> reward;              // [P_l]
    std::vector<std::vector<double>> step;   // [P_l][P_l']
};

// One T2-slot reward and carry-over kernel for action a at T1-slot m,
// rebuilt from scratch on the model's quadrature atoms.
Kernel build(const MdpModel& model, std::size_t m, const UpperAction& a) {
    const MarketParams& p = model.params;
    int P = model.opts.P_max;
    int N = model.opts.N_max;
    double kappa = model.opp.lambda_o[m - 1] * model.opp.T2;
    std::vector<double> pois = poisson_pmf(kappa, N);

    QuadRule wq = normal_quadrature(model.wind.theta[m - 1], model.wind.sigma,
                                    model.opts.quad_nodes_w);
    double d_mean = model.trad.alpha_t[m - 1] * std::pow(a.u, model.trad.gamma_t[m - 1]);
    QuadRule dq = normal_quadrature(d_mean, model.trad.sigma_t, model.opts.quad_nodes_d);
    double w_lo = model.wind.theta[m - 1] - model.wind.sigma;
    double w_hi = model.wind.theta[m - 1] + model.wind.sigma;
    double d_lo = d_mean - model.trad.sigma_t, d_hi = d_mean + model.trad.sigma_t;
    auto bin3 = [](double x, double lo, double hi) { return x < lo ? 0 : (x <= hi ? 1 : 2); };

    const ZetaRule& zeta = model.zeta_family.at(a.zeta);
    DayAheadDecision dec{a.s * p.K, a.u};

    Kernel out;
    out.reward.assign(P + 1, 0.0);
    out.step.assign(P + 1, std::vector<double>(P + 1, 0.0));
    for (std::size_t i = 0; i < wq.size(); ++i)
        for (std::size_t j = 0; j < dq.size(); ++j) {
            double weight = wq.weights[i] * dq.weights[j];
            int wb = bin3(wq.points[i], w_lo, w_hi);
            int db = bin3(dq.points[j], d_lo, d_hi);
            LowerState st{wq.points[i], dq.points[j]};
            for (int pl = 0; pl <= P; ++pl) {
                double v = model.opts.price_grid[zeta.cell(wb, db, pl)];
                double p_acc = std::min(1.0, std::pow(v / model.opp.v_min, model.opp.gamma_o));
                double r = 0.0;
                for (int n = 0; n <= N; ++n) {
                    if (pois[n] == 0.0) continue;
                    std::vector<double> act = binom_pmf(n + pl, p_acc);
                    double inner = 0.0;
                    for (int na = 0; na < int(act.size()); ++na)
                        inner += act[na] *
                                 realtime_profit_realized(p, dec, st, v, double(na) * model.opp.E_o);
                    r += pois[n] * inner;
                    std::vector<double> stay = binom_pmf(n + pl, 1.0 - p_acc);
                    for (int k = 0; k < int(stay.size()); ++k)
                        out.step[pl][std::min(k, P)] += weight * pois[n] * stay[k];
                }
                out.reward[pl] += weight * r;
            }
        }
    return out;
}

std::vector<double> lower_sum(const Kernel& k, int K, int P) {
    std::vector<double> V(P + 1, 0.0), next(P + 1, 0.0);
    for (int step = 0; step < K; ++step) {
        for (int pl = 0; pl <= P; ++pl) {
            double cont = 0.0;
            for (int pn = 0; pn <= P; ++pn) cont += k.step[pl][pn] * V[pn];
            next[pl] = k.reward[pl] + cont;
        }
        V.swap(next);
    }
    return V;
}

std::vector<std::vector<double>> kernel_power(const Kernel& k, int K, int P) {
    std::vector<std::vector<double>> acc(P + 1, std::vector<double>(P + 1, 0.0));
    for (int i = 0; i <= P; ++i) acc[i][i] = 1.0;
    for (int step = 0; step < K; ++step) {
        std::vector<std::vector<double>> next(P + 1, std::vector<double>(P + 1, 0.0));
        for (int i = 0; i <= P; ++i)
            for (int j = 0; j <= P; ++j) {
                double s = 0.0;
                for (int l = 0; l <= P; ++l) s += acc[i][l] * k.step[l][j];
                next[i][j] = s;
            }
        acc.swap(next);
    }
    return acc;
}

}  // namespace enum4

bool criterion4() {
    MarketParams p;
    p.c1 = 1.0;
    p.c2 = 2.0;
    p.c_p = 0.5;
    p.u_cap = 4.0;
    p.v_cap = 6.0;
    p.M = 2;
    p.K = 2;
    WindModel wind;
    wind.theta = {2.0, 3.0};
    wind.sigma = 0.8;
    TraditionalDemandModel trad;
    trad.alpha_t = {16.0, 16.0};
    trad.gamma_t = {-2.0, -2.0};
    trad.sigma_t = 0.5;
    OpportunisticModel opp;
    opp.lambda_o = {1.5, 1.5};
    opp.T2 = 1.0;
    opp.gamma_o = -2.0;
    opp.v_min = 0.5;
    opp.E_o = 0.5;
    MdpOptions opts;
    opts.s_grid = {0.5, 2.0};
    opts.u_grid = {1.5, 2.0};
    opts.price_grid = {0.8, 3.0};
    opts.zeta_family_size = 4;
    opts.P_max = 2;
    opts.N_max = 6;
    opts.quad_nodes_w = 3;
    opts.quad_nodes_d = 3;
    MdpModel model = make_mdp_model(p, wind, trad, opp, opts);
    PolicyTable table = solve_backward(model);

    int P = model.opts.P_max;
    std::vector<UpperAction> actions;
    for (double u : model.opts.u_grid)
        for (double s : model.opts.s_grid)
            for (std::size_t z = 0; z < model.zeta_family.size(); ++z)
                actions.push_back({s, u, int(z)});
    std::size_t A = actions.size();

    std::vector<std::vector<double>> R1(A), R2(A);
    std::vector<std::vector<std::vector<double>>> K1(A);
    for (std::size_t ai = 0; ai < A; ++ai) {
        enum4::Kernel k1 = enum4::build(model, 1, actions[ai]);
        enum4::Kernel k2 = enum4::build(model, 2, actions[ai]);
        R1[ai] = enum4::lower_sum(k1, p.K, P);
        R2[ai] = enum4::lower_sum(k2, p.K, P);
        K1[ai] = enum4::kernel_power(k1, p.K, P);
    }

    // Terminal stage: pointwise action max.
    std::vector<double> V2(P + 1, -1e300);
    for (int pu = 0; pu <= P; ++pu)
        for (std::size_t ai = 0; ai < A; ++ai) V2[pu] = std::max(V2[pu], R2[ai][pu]);

    // Stage 1 maximized over the stage-1 action and every stage-2 policy
    // map sigma: carried-over count -> action. The inner maximization
    // factorizes per state, but enumerate it whole to exercise the original
    // nested formulation rather than the recursion being verified.
    std::vector<double> V1(P + 1, -1e300);
    std::vector<std::size_t> sigma(P + 1, 0);
    std::function<void(int)> recurse = [&](int state) {
        if (state > P) {
            for (std::size_t a1 = 0; a1 < A; ++a1)
                for (int pu = 0; pu <= P; ++pu) {
                    double total = R1[a1][pu];
                    for (int pn = 0; pn <= P; ++pn)
                        total += K1[a1][pu][pn] * R2[sigma[pn]][pn];
                    V1[pu] = std::max(V1[pu], total);
                }
            return;
        }
        for (std::size_t a = 0; a < A; ++a) {
            sigma[state] = a;
            recurse(state + 1);
        }
    };
    recurse(0);

    for (int pu = 0; pu <= P; ++pu) {
        if (std::abs(table.value[1][pu] - V2[pu]) > 1e-9)
            return report(4, false,
                          "terminal value mismatch at P_u=" + std::to_string(pu) + ": " +
                              fmt(table.value[1][pu]) + " vs " + fmt(V2[pu]));
        if (std::abs(table.value[0][pu] - V1[pu]) > 1e-9)
            return report(4, false,
                          "day value mismatch at P_u=" + std::to_string(pu) + ": " +
                              fmt(table.value[0][pu]) + " vs enumeration " + fmt(V1[pu]));
    }
    return report(4, true,
                  "backward induction equals nested-policy enumeration (" + std::to_string(A) +
                      " actions, " + fmt(double(std::pow(double(A), P + 1)) * double(A)) +
                      " policy combinations) within 1e-9");
}

// ---------------------------------------------------------------------------
// 5. Counting kernels normalize.

bool criterion5() {
    Rng rng(505);
    const int n_draws = 1000;
    for (int t = 0; t < n_draws; ++t) {
        OpportunisticModel opp;
        double lambda = rng.uniform(0.0, 25.0);
        opp.lambda_o = {lambda, lambda};
        opp.T2 = rng.uniform(0.25, 3.0);
        opp.gamma_o = rng.uniform(-5.0, -0.1);
        opp.v_min = rng.uniform(0.1, 3.0);
        opp.E_o = rng.uniform(0.05, 2.0);
        opp.validate();

        int N_max = 1 + int(rng.uniform(0.0, 40.0));
        int P_max = 1 + int(rng.uniform(0.0, 12.0));
        long P_l = long(rng.uniform(0.0, double(P_max) + 0.999));
        long N = long(rng.uniform(0.0, 30.0));
        double v = rng.uniform(opp.v_min * 0.2, 15.0);

        std::vector<double> act = active_count_pmf(opp, N, P_l, v);
        double sum_a = 0.0;
        for (double x : act) {
            if (x < 0.0) return report(5, false, "negative active-count mass at draw " + std::to_string(t));
            sum_a += x;
        }
        std::vector<double> trans = persistent_transition_pmf(opp, 1, P_l, v, N_max, P_max);
        double sum_t = 0.0;
        for (double x : trans) {
            if (x < 0.0) return report(5, false, "negative carry-over mass at draw " + std::to_string(t));
            sum_t += x;
        }
        if (std::abs(sum_a - 1.0) > 1e-9 || std::abs(sum_t - 1.0) > 1e-9)
            return report(5, false,
                          "pmf sums " + fmt(sum_a) + " / " + fmt(sum_t) + " at draw " +
                              std::to_string(t));
    }
    return report(5, true,
                  "active-count and carry-over pmfs sum to 1 +- 1e-9 over " +
                      std::to_string(n_draws) + " random parameter draws");
}

// ---------------------------------------------------------------------------
// 6. Margin trends across the penetration grid.

bool criterion6() {
    ExperimentSpec spec;
    spec.params.c1 = 1.0;
    spec.params.c2 = 2.0;
    spec.params.c_p = 0.5;
    spec.params.u_cap = 4.0;
    spec.params.v_cap = 6.0;
    spec.params.M = 2;
    spec.params.K = 2;
    spec.gamma_t = -0.5;
    spec.gamma_o = -2.0;
    spec.sigma_t = 0.0;
    spec.v_min = 1.0;
    spec.E_o = 0.25;
    spec.base_traditional_demand = 10.0;
    spec.wind_sigma_ratio = 0.2;
    // Default reference price (the real-time cap) sizes the opportunistic
    // crowd so that its arrival noise, not the wind, dominates the demand
    // side; that uncertainty is what drags the margin down as the share grows.
    spec.wind_penetration = {0.1, 0.2, 0.3};
    spec.opp_penetration = {0.1, 0.2, 0.3};
    spec.replicates = 20000;
    spec.seed = 601;

    std::vector<ResultRow> rows = sweep(spec, 4);
    if (rows.size() != 9) return report(6, false, "expected 9 cells, got " + std::to_string(rows.size()));
    std::vector<double> rw, ro, margin;
    for (const ResultRow& r : rows) {
        if (r.status != "ok")
            return report(6, false, "cell r_w=" + fmt(r.r_w) + " r_o=" + fmt(r.r_o) + " " + r.status);
        rw.push_back(r.r_w);
        ro.push_back(r.r_o);
        margin.push_back(r.margin);
    }
    // Each trend is tested with the other penetration held as the stratum,
    // since both move across the grid and would otherwise confound the ranks.
    const std::size_t perms = 200000;
    double p_rw = trend::spearman_block_pvalue(rw, margin, ro, +1, perms, 99);
    double p_ro = trend::spearman_block_pvalue(ro, margin, rw, -1, perms, 98);
    bool ok = p_rw < 0.01 && p_ro < 0.01;
    return report(6, ok,
                  "margin rises with wind share (p=" + fmt(p_rw) +
                      ") and falls with opportunistic share (p=" + fmt(p_ro) + ") at " +
                      std::to_string(spec.replicates) + " replicates/cell");
}

// ---------------------------------------------------------------------------
// 7. Two-timescale vs. benchmark margins across elasticity at 20% wind.

bool criterion7() {
    ExperimentSpec spec;
    spec.params.c1 = 1.0;
    spec.params.c2 = 2.0;
    // A stiff cancellation fee prices the inflexibility the fixed-price
    // benchmark cannot escape; the real-time price dodges most cancellations
    // by selling surplus down the demand curve.
    spec.params.c_p = 0.8;
    spec.params.u_cap = 4.0;
    spec.params.v_cap = 7.0;  // above the deficit-side price at elasticity -1.5
    spec.params.M = 2;
    spec.params.K = 2;
    spec.sigma_t = 0.5;
    spec.v_min = 1.0;
    // Quote the opportunistic share at the floor so the same physical crowd
    // shows up at every elasticity, and keep each user small so the crowd's
    // arrival noise stays below the wind noise the real-time price can hedge.
    spec.E_o = 0.05;
    spec.base_traditional_demand = 10.0;
    spec.wind_sigma_ratio = 0.3;
    spec.reference_price = 1.0;
    spec.elasticity = {-1.5, -2.0, -2.5, -3.0};
    spec.wind_penetration = {0.2};
    spec.opp_penetration = {0.5};
    spec.compare_benchmark = true;
    spec.replicates = 60000;
    spec.seed = 701;

    std::vector<ResultRow> rows = sweep(spec, 4);
    if (rows.size() != 8) return report(7, false, "expected 8 rows, got " + std::to_string(rows.size()));
    std::vector<double> tt, bench;
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        if (rows[i].status != "ok" || rows[i + 1].status != "ok")
            return report(7, false, "skipped cell at elasticity " + fmt(rows[i].gamma_t));
        if (rows[i].mode != "two-timescale" || rows[i + 1].mode != "benchmark")
            return report(7, false, "unexpected row order");
        tt.push_back(rows[i].margin);
        bench.push_back(rows[i + 1].margin);
    }
    for (std::size_t i = 0; i < tt.size(); ++i) {
        if (!(tt[i] >= bench[i]))
            return report(7, false,
                          "two-timescale margin " + fmt(tt[i]) + " below benchmark " +
                              fmt(bench[i]) + " at elasticity " + fmt(spec.elasticity[i]));
        if (i > 0 && !(tt[i] < tt[i - 1] && bench[i] < bench[i - 1]))
            return report(7, false,
                          "margins not decreasing in |elasticity| between " +
                              fmt(spec.elasticity[i - 1]) + " and " + fmt(spec.elasticity[i]));
    }
    return report(7, true,
                  "two-timescale margin dominates the benchmark at every elasticity and both fall "
                  "as |elasticity| grows (margins " +
                      fmt(tt.front()) + " -> " + fmt(tt.back()) + " vs " + fmt(bench.front()) +
                      " -> " + fmt(bench.back()) + ")");
}

// ---------------------------------------------------------------------------
// 8. Byte-identical reruns of every CLI subcommand.

namespace det8 {

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        files[fs::relative(entry.path(), dir).string()] = buf.str();
    }
    return files;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Run {
    int exit_code = -1;
    std::string stdout_text;
    std::map<std::string, std::string> files;
};

Run run_cli(const std::string& cli, const std::string& args, const fs::path& out_dir,
            const fs::path& log) {
    std::string cmd = "'" + cli + "' " + args + " > '" + log.string() + "' 2>&1";
    int rc = std::system(cmd.c_str());
    Run r;
    r.exit_code = rc;
    r.stdout_text = read_file(log);
    r.files = snapshot(out_dir);
    return r;
}

bool same(const Run& a, const Run& b, const std::string& what, std::string* why) {
    if (a.exit_code != b.exit_code) {
        *why = what + ": exit codes differ";
        return false;
    }
    if (a.stdout_text != b.stdout_text) {
        *why = what + ": stdout differs";
        return false;
    }
    if (a.files.size() != b.files.size()) {
        *why = what + ": file sets differ";
        return false;
    }
    for (const auto& [name, bytes] : a.files) {
        auto it = b.files.find(name);
        if (it == b.files.end() || it->second != bytes) {
            *why = what + ": " + name + " differs between runs";
            return false;
        }
    }
    return true;
}

}  // namespace det8

bool criterion8(const std::string& cli) {
    if (cli.empty()) return report(8, false, "no --cli path supplied");
    fs::path root = fs::temp_directory_path() / "windsched_accept8";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);

    using nlohmann::json;
    json market = {{"c1", 1.0}, {"c2", 2.0},   {"c_p", 0.5}, {"u_cap", 4.0},
                   {"v_cap", 6.0}, {"M", 2}, {"K", 2}};
    json models_np = {
        {"seed", 11},
        {"market", market},
        {"wind", {{"theta", 3.0}, {"sigma", 0.5}}},
        {"traditional", {{"alpha_t", 20.0}, {"gamma_t", -0.5}, {"sigma_t", 0.2}}},
        {"opportunistic",
         {{"lambda_o", 2.0}, {"T2", 1.0}, {"gamma_o", -2.0}, {"v_min", 1.0}, {"E_o", 0.25}}},
        {"solver", {{"quad_nodes", 32}}}};
    fs::path cfg_np = root / "nonpersistent.json";
    std::ofstream(cfg_np) << models_np.dump(2);

    fs::path out_p = root / "outP";
    json models_p = models_np;
    models_p["seed"] = 12;
    models_p["opportunistic"]["lambda_o"] = 1.0;
    models_p["solver"]["mdp"] = {{"s_grid", {0.5, 1.5, 2.5}}, {"u_grid", {2.0, 3.0}},
                                 {"price_grid", {1.0, 3.5, 6.0}}, {"zeta_family_size", 4},
                                 {"P_max", 4},  {"N_max", 8},
                                 {"quad_nodes_w", 3}, {"quad_nodes_d", 3}};
    models_p["simulate"] = {{"policy_file", (out_p / "policy.txt").string()}, {"n_days", 200}};
    fs::path cfg_p = root / "persistent.json";
    std::ofstream(cfg_p) << models_p.dump(2);

    json sweep_cfg = {{"seed", 13},
                      {"market", market},
                      {"experiment",
                       {{"mode", "two-timescale"},
                        {"compare_benchmark", true},
                        {"wind_penetration", {0.1, 0.25}},
                        {"opp_penetration", {0.1, 0.25}},
                        {"reference_price", 1.0},
                        {"replicates", 3000}}}};
    fs::path cfg_sweep = root / "sweep.json";
    std::ofstream(cfg_sweep) << sweep_cfg.dump(2);

    struct Step {
        std::string name;
        std::string args;
        fs::path out;
    };
    fs::path out_np = root / "outN", out_sim = root / "outS", out_sw = root / "outW";
    std::vector<Step> steps = {
        {"solve-nonpersistent",
         "solve-nonpersistent --config '" + cfg_np.string() + "' --out '" + out_np.string() + "'",
         out_np},
        {"solve-persistent",
         "solve-persistent --config '" + cfg_p.string() + "' --out '" + out_p.string() + "'",
         out_p},
        {"simulate",
         "simulate --config '" + cfg_p.string() + "' --out '" + out_sim.string() + "'", out_sim},
        {"sweep", "sweep --config '" + cfg_sweep.string() + "' --out '" + out_sw.string() + "'",
         out_sw},
    };

    for (const Step& step : steps) {
        det8::Run first = det8::run_cli(cli, step.args, step.out, root / (step.name + ".log1"));
        if (first.exit_code != 0) {
            report(8, false, step.name + " exited with " + std::to_string(first.exit_code));
            return false;
        }
        det8::Run second = det8::run_cli(cli, step.args, step.out, root / (step.name + ".log2"));
        std::string why;
        if (!det8::same(first, second, step.name, &why)) return report(8, false, why);
        if (first.files.empty()) return report(8, false, step.name + " produced no output files");
    }
    fs::remove_all(root, ec);
    return report(8, true, "all four subcommands byte-identical across reruns");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> criteria;
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            criteria.push_back(std::atoi(argv[++i]));
        } else if (arg == "--all") {
            criteria = {1, 2, 3, 4, 5, 6, 7, 8};
        } else if (arg == "--cli" && i + 1 < argc) {
            cli = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]... [--all] [--cli PATH]\n", argv[0]);
            return 2;
        }
    }
    if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8};

    bool all_ok = true;
    for (int n : criteria) {
        bool ok = false;
        switch (n) {
            case 1: ok = criterion1(); break;
            case 2: ok = criterion2(); break;
            case 3: ok = criterion3(); break;
            case 4: ok = criterion4(); break;
            case 5: ok = criterion5(); break;
            case 6: ok = criterion6(); break;
            case 7: ok = criterion7(); break;
            case 8: ok = criterion8(cli); break;
            default:
                std::fprintf(stderr, "unknown criterion %d\n", n);
                return 2;
        }
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
