#pragma once

// Finite-horizon MDP for persistent opportunistic users. Users who reject
// the posted price stay for the next T2-slot, so the day-ahead action is
// (s_m, u_m, zeta_m) where zeta_m maps the discretized real-time state to a
// price. Promoting zeta_m to the day-ahead level turns the two-level
// problem into a classic MDP over the carried-over user count, solved by
// backward induction over T1-slots.
//
// Discretization choices (all reported through PolicyTable):
//  - zeta_m domain: 3 wind bins x 3 demand bins (edges at mean +- 1 sigma)
//    x carried-over count, codomain a finite price grid;
//  - arrivals N truncated at N_max with the tail folded into the last
//    bucket, so kernels stay exactly stochastic;
//  - carried-over count capped at P_max, overflow folded likewise;
//  - continuous (W, D_t) reduced to Gauss-Hermite atoms. The solved model
//    is therefore a finite MDP in its own right: every consistency oracle
//    can match it to machine precision.
//
// Acceptance uses P(V >= v) throughout; a user who accepts is served in
// that slot and leaves, so the carry-over count follows
// Binomial(N + P_l, 1 - p_acc(v)) and the active count the complementary
// binomial.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "windsched/market.hpp"
#include "windsched/models.hpp"
#include "windsched/nonpersistent.hpp"
#include "windsched/quadrature.hpp"
#include "windsched/rng.hpp"

namespace windsched {

// ---------------------------------------------------------------------------
// Counting kernels

// Poisson(kappa) over {0..N_max} with all tail mass folded into N_max.
inline std::vector<double> truncated_poisson_pmf(double kappa, int N_max) {
    if (N_max < 0) throw std::invalid_argument("truncated_poisson_pmf: N_max < 0");
    if (kappa < 0.0) throw std::invalid_argument("truncated_poisson_pmf: kappa < 0");
    std::vector<double> pmf(N_max + 1, 0.0);
    if (kappa == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    double partial = 0.0;
    double log_kappa = std::log(kappa);
    for (int n = 0; n < N_max; ++n) {
        pmf[n] = std::exp(-kappa + n * log_kappa - std::lgamma(n + 1.0));
        partial += pmf[n];
    }
    pmf[N_max] = std::max(0.0, 1.0 - partial);  // fold the tail
    return pmf;
}

// Binomial(n, p) pmf; log-space evaluation keeps it stable for any (n, p).
inline std::vector<double> binomial_pmf(long n, double p) {
    if (n < 0) throw std::invalid_argument("binomial_pmf: n < 0");
    std::vector<double> pmf(n + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    double lp = std::log(p), lq = std::log1p(-p), lgn = std::lgamma(n + 1.0);
    for (long k = 0; k <= n; ++k) {
        pmf[k] = std::exp(lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp +
                          (n - k) * lq);
    }
    return pmf;
}

// Number of users that accept price v out of N fresh arrivals plus P_l
// carried over: Binomial(N + P_l, p_acc(v)).
inline std::vector<double> active_count_pmf(const OpportunisticModel& opp, long N, long P_l,
                                            double v) {
    if (N < 0 || P_l < 0) throw std::invalid_argument("active_count_pmf: negative count");
    return binomial_pmf(N + P_l, acceptance_prob(opp, v));
}

// Carry-over kernel: mixture over N ~ truncated Poisson(kappa1) of
// Binomial(N + P_l, 1 - p_acc(v)), folded at P_max.
inline std::vector<double> persistent_transition_pmf(const OpportunisticModel& opp, std::size_t m,
                                                     long P_l, double v, int N_max, int P_max) {
    if (P_l < 0 || P_l > P_max) throw std::invalid_argument("persistent_transition_pmf: P_l outside grid");
    std::vector<double> pois = truncated_poisson_pmf(opp.kappa1(m), N_max);
    double p_stay = 1.0 - acceptance_prob(opp, v);
    std::vector<double> out(P_max + 1, 0.0);
    for (int n = 0; n <= N_max; ++n) {
        if (pois[n] == 0.0) continue;
        std::vector<double> bin = binomial_pmf(n + P_l, p_stay);
        for (std::size_t j = 0; j < bin.size(); ++j) {
            out[std::min<std::size_t>(j, P_max)] += pois[n] * bin[j];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Real-time pricing rules (zeta)

// Tri-valued bin with edges at mean +- 1 sigma.
struct Bin3 {
    double lo = 0.0, hi = 0.0;
    int operator()(double x) const { return x < lo ? 0 : (x <= hi ? 1 : 2); }
};

inline Bin3 make_bins(double mean, double sigma) { return {mean - sigma, mean + sigma}; }

// Lookup table from (wind bin, demand bin, carried-over count) to an index
// into a shared price grid.
struct ZetaRule {
    int n_pl = 0;                          // carried-over axis size, P_max + 1
    std::vector<std::uint8_t> price_idx;   // 3 * 3 * n_pl entries

    int cell(int w_bin, int d_bin, int pl) const {
        return price_idx[(w_bin * 3 + d_bin) * n_pl + std::min(pl, n_pl - 1)];
    }

    bool operator<(const ZetaRule& o) const { return price_idx < o.price_idx; }
    bool operator==(const ZetaRule& o) const { return price_idx == o.price_idx; }
};

// Deterministic family of pricing rules: all constant tables first, then
// two-price threshold rules that switch to the higher price when
// (demand bin + carried-over count - wind bin) reaches a threshold, i.e.
// charge more when the system is loaded. Generation order is fixed, the
// list is truncated to family_size, then sorted so that rule indices are
// reproducible and tie-breaking is well defined.
inline std::vector<ZetaRule> make_zeta_family(int n_prices, int P_max, int family_size) {
    if (n_prices < 1 || family_size < 1)
        throw std::invalid_argument("make_zeta_family: empty price grid or family");
    int n_pl = P_max + 1;
    int cells = 3 * 3 * n_pl;
    std::vector<ZetaRule> family;

    auto push_constant = [&](int price) {
        ZetaRule r;
        r.n_pl = n_pl;
        r.price_idx.assign(cells, std::uint8_t(price));
        family.push_back(std::move(r));
    };
    auto push_threshold = [&](int i_lo, int i_hi, int tau) {
        ZetaRule r;
        r.n_pl = n_pl;
        r.price_idx.resize(cells);
        for (int wb = 0; wb < 3; ++wb)
            for (int db = 0; db < 3; ++db)
                for (int pl = 0; pl < n_pl; ++pl) {
                    int score = db + pl - wb;
                    r.price_idx[(wb * 3 + db) * n_pl + pl] =
                        std::uint8_t(score >= tau ? i_hi : i_lo);
                }
        family.push_back(std::move(r));
    };

    for (int i = 0; i < n_prices && int(family.size()) < family_size; ++i) push_constant(i);
    // score ranges over [-2, 2 + P_max]; thresholds outside (-2, 2 + P_max]
    // would duplicate the constant tables.
    for (int i_lo = 0; i_lo < n_prices && int(family.size()) < family_size; ++i_lo)
        for (int i_hi = i_lo + 1; i_hi < n_prices && int(family.size()) < family_size; ++i_hi)
            for (int tau = -1; tau <= P_max + 2 && int(family.size()) < family_size; ++tau)
                push_threshold(i_lo, i_hi, tau);

    std::sort(family.begin(), family.end());
    return family;
}

// ---------------------------------------------------------------------------
// MDP assembly

struct PersistentLowerState {
    double W = 0.0;
    double D_t = 0.0;
    long P_l = 0;
};

struct UpperAction {
    double s = 0.0;  // base-load energy per T2-slot
    double u = 0.0;  // day-ahead price
    int zeta = 0;    // index into the zeta family
};

struct MdpOptions {
    std::vector<double> s_grid;      // per-T2-slot procurement candidates
    std::vector<double> u_grid;      // day-ahead price candidates
    std::vector<double> price_grid;  // zeta codomain, within [v_min, v_cap]
    int zeta_family_size = 16;
    int P_max = -1;  // < 0: auto, 4 * ceil(max kappa1 * K)
    int N_max = -1;  // < 0: auto, ceil(kappa1 + 6 sqrt(kappa1)) per slot max
    int quad_nodes_w = 8;
    int quad_nodes_d = 8;
    double work_budget = 5e9;  // refuse solves costlier than this many inner ops
};

// Resolved, validated instance. Everything downstream (solver, oracle,
// simulator) reads the discretization from here so they can never drift
// apart.
struct MdpModel {
    MarketParams params;
    WindModel wind;
    TraditionalDemandModel trad;
    OpportunisticModel opp;
    MdpOptions opts;  // with P_max / N_max resolved
    std::vector<ZetaRule> zeta_family;

    int P_max() const { return opts.P_max; }
    int N_max() const { return opts.N_max; }

    Bin3 wind_bins(std::size_t m) const { return make_bins(wind.theta[m - 1], wind.sigma); }
    Bin3 demand_bins(std::size_t m, double u) const {
        return make_bins(traditional_demand_mean(trad, m, u), trad.sigma_t);
    }
};

inline MdpModel make_mdp_model(const MarketParams& params, const WindModel& wind,
                               const TraditionalDemandModel& trad, const OpportunisticModel& opp,
                               MdpOptions opts) {
    params.validate();
    wind.validate();
    trad.validate();
    opp.validate();
    std::size_t M = params.M;
    if (wind.slots() != M || trad.slots() != M || opp.slots() != M)
        throw std::invalid_argument("make_mdp_model: model arrays must have M entries");
    if (opts.s_grid.empty() || opts.u_grid.empty() || opts.price_grid.empty())
        throw std::invalid_argument("make_mdp_model: empty action grid");
    for (double s : opts.s_grid)
        if (!(s >= 0.0)) throw std::invalid_argument("make_mdp_model: s_grid entries must be >= 0");
    for (double u : opts.u_grid)
        if (!(u > 0.0 && u <= params.u_cap))
            throw std::invalid_argument("make_mdp_model: u_grid entries must lie in (0, u_cap]");
    for (double v : opts.price_grid)
        if (!(v >= opp.v_min && v <= params.v_cap))
            throw std::invalid_argument("make_mdp_model: price_grid entries must lie in [v_min, v_cap]");
    if (opts.price_grid.size() > 255)
        throw std::invalid_argument("make_mdp_model: price grid too large (max 255)");
    if (opts.quad_nodes_w < 1 || opts.quad_nodes_d < 1)
        throw std::invalid_argument("make_mdp_model: quadrature nodes must be >= 1");

    std::sort(opts.s_grid.begin(), opts.s_grid.end());
    std::sort(opts.u_grid.begin(), opts.u_grid.end());
    std::sort(opts.price_grid.begin(), opts.price_grid.end());

    double kmax = 0.0;
    for (std::size_t m = 1; m <= M; ++m) kmax = std::max(kmax, opp.kappa1(m));
    if (opts.N_max < 0) opts.N_max = int(std::ceil(kmax + 6.0 * std::sqrt(kmax)));
    if (opts.P_max < 0) opts.P_max = std::max(1, 4 * int(std::ceil(kmax * params.K)));

    MdpModel model{params, wind, trad, opp, std::move(opts), {}};
    model.zeta_family = make_zeta_family(int(model.opts.price_grid.size()), model.opts.P_max,
                                         model.opts.zeta_family_size);
    return model;
}

// Rough count of inner accumulation operations for one full solve; the CLI
// refuses configurations whose estimate exceeds opts.work_budget.
inline double mdp_work_estimate(const MdpModel& model) {
    double nodes = double(model.opts.quad_nodes_w) * model.opts.quad_nodes_d;
    double P = model.opts.P_max + 1;
    double actions = double(model.opts.s_grid.size()) * model.opts.u_grid.size() *
                     model.zeta_family.size();
    double per_action = nodes * P * (model.opts.N_max + P + 2.0) + model.params.K * P * P;
    return model.params.M * actions * per_action;
}

// Expected one-slot reward of price v at quadrature state (W, D_t) with P_l
// carried-over users: expectation over arrivals and acceptances of the
// realized profit at D_o = N_a E_o.
inline double immediate_reward_lower(const MarketParams& params, const OpportunisticModel& opp,
                                     std::size_t m, double s, double u, double v,
                                     const PersistentLowerState& state, int N_max) {
    std::vector<double> pois = truncated_poisson_pmf(opp.kappa1(m), N_max);
    DayAheadDecision dec{s * params.K, u};  // realized-profit helper divides by K
    LowerState ls{state.W, state.D_t};
    double acc = 0.0;
    double p = acceptance_prob(opp, v);
    for (int n = 0; n <= N_max; ++n) {
        if (pois[n] == 0.0) continue;
        std::vector<double> bin = binomial_pmf(n + state.P_l, p);
        double inner = 0.0;
        for (std::size_t na = 0; na < bin.size(); ++na) {
            if (bin[na] == 0.0) continue;
            inner += bin[na] * realtime_profit_realized(params, dec, ls, v, double(na) * opp.E_o);
        }
        acc += pois[n] * inner;
    }
    return acc;
}

// Per-action building blocks on the carried-over-count grid: expected
// one-slot reward r[P_l] and one-slot kernel step[P_l][P_l'], both already
// averaged over the (W, D_t) atoms.
struct ActionEval {
    std::vector<double> reward;
    std::vector<std::vector<double>> step;
};

namespace detail {

// Mixture over N of Binomial(N + P_l, p_acc): pmf of the active count
// before conditioning on the state atoms. Cached per (price, P_l).
inline std::vector<double> active_mixture_pmf(const OpportunisticModel& opp, std::size_t m,
                                              long P_l, double v, int N_max) {
    std::vector<double> pois = truncated_poisson_pmf(opp.kappa1(m), N_max);
    double p = acceptance_prob(opp, v);
    std::vector<double> out(N_max + P_l + 1, 0.0);
    for (int n = 0; n <= N_max; ++n) {
        if (pois[n] == 0.0) continue;
        std::vector<double> bin = binomial_pmf(n + P_l, p);
        for (std::size_t na = 0; na < bin.size(); ++na) out[na] += pois[n] * bin[na];
    }
    return out;
}

struct SlotTables {
    // [price][P_l] -> pmf over N_a and over P_l'
    std::vector<std::vector<std::vector<double>>> active;
    std::vector<std::vector<std::vector<double>>> trans;
};

inline SlotTables make_slot_tables(const MdpModel& model, std::size_t m) {
    SlotTables t;
    int P = model.opts.P_max;
    std::size_t n_prices = model.opts.price_grid.size();
    t.active.resize(n_prices);
    t.trans.resize(n_prices);
    for (std::size_t vi = 0; vi < n_prices; ++vi) {
        double v = model.opts.price_grid[vi];
        t.active[vi].resize(P + 1);
        t.trans[vi].resize(P + 1);
        for (int pl = 0; pl <= P; ++pl) {
            t.active[vi][pl] = active_mixture_pmf(model.opp, m, pl, v, model.opts.N_max);
            t.trans[vi][pl] =
                persistent_transition_pmf(model.opp, m, pl, v, model.opts.N_max, P);
        }
    }
    return t;
}

}  // namespace detail

// Evaluate one upper action at slot m against precomputed per-slot count
// tables (see detail::make_slot_tables).
inline ActionEval evaluate_action(const MdpModel& model, std::size_t m, const UpperAction& a,
                                  const detail::SlotTables& tables) {
    const MarketParams& params = model.params;
    int P = model.opts.P_max;
    const ZetaRule& zeta = model.zeta_family.at(a.zeta);

    QuadRule wq = normal_quadrature(model.wind.theta[m - 1], model.wind.sigma,
                                    model.opts.quad_nodes_w);
    QuadRule dq = normal_quadrature(traditional_demand_mean(model.trad, m, a.u),
                                    model.trad.sigma_t, model.opts.quad_nodes_d);
    Bin3 wb = model.wind_bins(m);
    Bin3 db = model.demand_bins(m, a.u);

    ActionEval eval;
    eval.reward.assign(P + 1, 0.0);
    eval.step.assign(P + 1, std::vector<double>(P + 1, 0.0));

    DayAheadDecision dec{a.s * params.K, a.u};
    for (std::size_t i = 0; i < wq.size(); ++i) {
        int wbin = wb(wq.points[i]);
        for (std::size_t j = 0; j < dq.size(); ++j) {
            double weight = wq.weights[i] * dq.weights[j];
            int dbin = db(dq.points[j]);
            LowerState ls{wq.points[i], dq.points[j]};
            for (int pl = 0; pl <= P; ++pl) {
                int vi = zeta.cell(wbin, dbin, pl);
                double v = model.opts.price_grid[vi];
                const std::vector<double>& na_pmf = tables.active[vi][pl];
                double r = 0.0;
                for (std::size_t na = 0; na < na_pmf.size(); ++na) {
                    if (na_pmf[na] == 0.0) continue;
                    r += na_pmf[na] *
                         realtime_profit_realized(params, dec, ls, v, double(na) * model.opp.E_o);
                }
                eval.reward[pl] += weight * r;
                const std::vector<double>& row = tables.trans[vi][pl];
                std::vector<double>& acc = eval.step[pl];
                for (int pn = 0; pn <= P; ++pn) acc[pn] += weight * row[pn];
            }
        }
    }
    return eval;
}

inline ActionEval evaluate_action(const MdpModel& model, std::size_t m, const UpperAction& a) {
    return evaluate_action(model, m, a, detail::make_slot_tables(model, m));
}

// R^u_m as a vector over the carried-over grid: V^l_1 of the K-slot
// recursion V^l_k = r + step . V^l_{k+1}, V^l_{K+1} = 0.
inline std::vector<double> lower_value_recursion(const MdpModel& model, std::size_t m,
                                                 const UpperAction& a) {
    ActionEval eval = evaluate_action(model, m, a);
    int P = model.opts.P_max;
    std::vector<double> V(P + 1, 0.0), next;
    for (int k = 0; k < model.params.K; ++k) {
        next.assign(P + 1, 0.0);
        for (int pl = 0; pl <= P; ++pl) {
            double cont = 0.0;
            for (int pn = 0; pn <= P; ++pn) cont += eval.step[pl][pn] * V[pn];
            next[pl] = eval.reward[pl] + cont;
        }
        V.swap(next);
    }
    return V;
}

struct PolicyEntry {
    int s_idx = 0, u_idx = 0, zeta_idx = 0;
    double value = 0.0;
};

struct LowerSurface {
    int s_idx = 0, u_idx = 0, zeta_idx = 0;
    std::vector<std::vector<double>> V;  // [k][P_l], k = 0 .. K-1
};

struct PolicyTable {
    MarketParams params;
    std::vector<double> s_grid, u_grid, price_grid;
    std::vector<ZetaRule> zeta_family;
    int P_max = 0, N_max = 0;
    int quad_nodes_w = 0, quad_nodes_d = 0;
    std::vector<std::vector<PolicyEntry>> best;      // [m-1][P_u]
    std::vector<std::vector<double>> value;          // [m-1][P_u] = V^u_m
    std::vector<std::vector<LowerSurface>> lower;    // [m-1][distinct chosen actions]
    std::vector<std::vector<int>> surface_of;        // [m-1][P_u] -> index into lower[m-1]

    UpperAction action_at(std::size_t m, long P_u) const {
        const PolicyEntry& e = best.at(m - 1).at(std::size_t(std::min<long>(P_u, P_max)));
        return {s_grid[e.s_idx], u_grid[e.u_idx], e.zeta_idx};
    }
};

// Backward induction over T1-slots. Actions are scanned in lexicographic
// order (u, then s, then zeta table), and the argmax keeps the first strict
// maximum, so ties resolve toward the lower price, then lower procurement.
inline PolicyTable solve_backward(const MdpModel& model) {
    const int M = model.params.M;
    const int P = model.opts.P_max;
    const std::size_t n_s = model.opts.s_grid.size();
    const std::size_t n_u = model.opts.u_grid.size();
    const std::size_t n_z = model.zeta_family.size();

    PolicyTable table;
    table.params = model.params;
    table.s_grid = model.opts.s_grid;
    table.u_grid = model.opts.u_grid;
    table.price_grid = model.opts.price_grid;
    table.zeta_family = model.zeta_family;
    table.P_max = P;
    table.N_max = model.opts.N_max;
    table.quad_nodes_w = model.opts.quad_nodes_w;
    table.quad_nodes_d = model.opts.quad_nodes_d;
    table.best.assign(M, std::vector<PolicyEntry>(P + 1));
    table.value.assign(M, std::vector<double>(P + 1, 0.0));
    table.lower.assign(M, {});
    table.surface_of.assign(M, std::vector<int>(P + 1, -1));

    std::vector<double> v_next(P + 1, 0.0);  // V^u_{m+1}; zero beyond the horizon
    for (int m = M; m >= 1; --m) {
        detail::SlotTables tables = detail::make_slot_tables(model, m);

        // Per action: total[P_u] = R^u_m + (step^K . V^u_{m+1})[P_u].
        std::size_t n_actions = n_u * n_s * n_z;
        std::vector<std::vector<double>> totals(n_actions);
        std::vector<ActionEval> evals(n_actions);
        for (std::size_t ui = 0; ui < n_u; ++ui)
            for (std::size_t si = 0; si < n_s; ++si)
                for (std::size_t zi = 0; zi < n_z; ++zi) {
                    std::size_t idx = (ui * n_s + si) * n_z + zi;
                    UpperAction a{model.opts.s_grid[si], model.opts.u_grid[ui], int(zi)};
                    ActionEval ev = evaluate_action(model, m, a, tables);
                    std::vector<double> V = m == M ? std::vector<double>(P + 1, 0.0) : v_next;
                    std::vector<double> next(P + 1, 0.0);
                    for (int k = 0; k < model.params.K; ++k) {
                        for (int pl = 0; pl <= P; ++pl) {
                            double cont = 0.0;
                            for (int pn = 0; pn <= P; ++pn) cont += ev.step[pl][pn] * V[pn];
                            next[pl] = ev.reward[pl] + cont;
                        }
                        V.swap(next);
                    }
                    totals[idx] = std::move(V);
                    evals[idx] = std::move(ev);
                }

        // Argmax per carried-over count, first strict maximum wins.
        for (int pu = 0; pu <= P; ++pu) {
            std::size_t best_idx = 0;
            double best_val = -std::numeric_limits<double>::infinity();
            for (std::size_t ui = 0; ui < n_u; ++ui)
                for (std::size_t si = 0; si < n_s; ++si)
                    for (std::size_t zi = 0; zi < n_z; ++zi) {
                        std::size_t idx = (ui * n_s + si) * n_z + zi;
                        if (totals[idx][pu] > best_val) {
                            best_val = totals[idx][pu];
                            best_idx = idx;
                        }
                    }
            std::size_t zi = best_idx % n_z;
            std::size_t si = (best_idx / n_z) % n_s;
            std::size_t ui = best_idx / (n_z * n_s);
            table.best[m - 1][pu] = {int(si), int(ui), int(zi), best_val};
            table.value[m - 1][pu] = best_val;
        }

        // Lower-level value surfaces (no continuation) for the chosen actions.
        for (int pu = 0; pu <= P; ++pu) {
            const PolicyEntry& e = table.best[m - 1][pu];
            int found = -1;
            for (std::size_t i = 0; i < table.lower[m - 1].size(); ++i) {
                const LowerSurface& srf = table.lower[m - 1][i];
                if (srf.s_idx == e.s_idx && srf.u_idx == e.u_idx && srf.zeta_idx == e.zeta_idx) {
                    found = int(i);
                    break;
                }
            }
            if (found < 0) {
                std::size_t idx = (std::size_t(e.u_idx) * n_s + e.s_idx) * n_z + e.zeta_idx;
                const ActionEval& ev = evals[idx];
                LowerSurface srf;
                srf.s_idx = e.s_idx;
                srf.u_idx = e.u_idx;
                srf.zeta_idx = e.zeta_idx;
                srf.V.assign(model.params.K, std::vector<double>(P + 1, 0.0));
                std::vector<double> V(P + 1, 0.0);
                for (int k = model.params.K - 1; k >= 0; --k) {
                    std::vector<double> cur(P + 1, 0.0);
                    for (int pl = 0; pl <= P; ++pl) {
                        double cont = 0.0;
                        for (int pn = 0; pn <= P; ++pn) cont += ev.step[pl][pn] * V[pn];
                        cur[pl] = ev.reward[pl] + cont;
                    }
                    srf.V[k] = cur;
                    V.swap(cur);
                }
                table.lower[m - 1].push_back(std::move(srf));
                found = int(table.lower[m - 1].size()) - 1;
            }
            table.surface_of[m - 1][pu] = found;
        }

        v_next = table.value[m - 1];
    }
    return table;
}

// ---------------------------------------------------------------------------
// Forward simulation

struct SimulateOptions {
    long n_days = 1000;
    // Draw (W, D_t) from the solver's quadrature atoms instead of the
    // continuous distributions; this makes V^u_1 the exact expectation of
    // the simulated profit (used by consistency tests).
    bool sample_from_quadrature = false;
};

struct SimulateStats {
    long days = 0;
    double profit_mean = 0.0;
    double profit_var = 0.0;  // across days
    double revenue_mean = 0.0;
    std::vector<double> occupancy;  // mean carried-over count entering slot (m, k)
    long clamped_lookups = 0;       // P_l above P_max at policy lookup
    long events[3] = {0, 0, 0};     // A / B / C counts
};

namespace detail {

inline double sample_from_rule(const QuadRule& rule, Rng& rng) {
    double x = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        cum += rule.weights[i];
        if (x < cum) return rule.points[i];
    }
    return rule.points.back();
}

}  // namespace detail

inline SimulateStats simulate_policy(const PolicyTable& table, const WindModel& wind,
                                     const TraditionalDemandModel& trad,
                                     const OpportunisticModel& opp, Rng& rng,
                                     const SimulateOptions& opts) {
    if (opts.n_days < 1) throw std::invalid_argument("simulate_policy: need n_days >= 1");
    const MarketParams& params = table.params;
    const int M = params.M, K = params.K;

    // Quadrature atoms per slot / per chosen price, built once.
    std::vector<QuadRule> wq(M);
    std::vector<std::vector<QuadRule>> dq(M);  // indexed by u_idx
    for (int m = 1; m <= M; ++m) {
        wq[m - 1] = normal_quadrature(wind.theta[m - 1], wind.sigma, table.quad_nodes_w);
        dq[m - 1].resize(table.u_grid.size());
        for (std::size_t ui = 0; ui < table.u_grid.size(); ++ui)
            dq[m - 1][ui] =
                normal_quadrature(traditional_demand_mean(trad, m, table.u_grid[ui]),
                                  trad.sigma_t, table.quad_nodes_d);
    }

    SimulateStats stats;
    stats.occupancy.assign(std::size_t(M) * K, 0.0);
    double sum = 0.0, sumsq = 0.0, revenue = 0.0;

    for (long day = 0; day < opts.n_days; ++day) {
        double day_profit = 0.0;
        long P_carry = 0;  // persistent users reset at day boundaries
        for (int m = 1; m <= M; ++m) {
            long lookup = P_carry;
            if (lookup > table.P_max) {
                lookup = table.P_max;
                ++stats.clamped_lookups;
            }
            const PolicyEntry& e = table.best[m - 1][lookup];
            double s = table.s_grid[e.s_idx];
            double u = table.u_grid[e.u_idx];
            const ZetaRule& zeta = table.zeta_family[e.zeta_idx];
            Bin3 wb = make_bins(wind.theta[m - 1], wind.sigma);
            Bin3 db = make_bins(traditional_demand_mean(trad, m, u), trad.sigma_t);
            DayAheadDecision dec{s * K, u};

            long P_l = P_carry;
            for (int k = 0; k < K; ++k) {
                stats.occupancy[std::size_t(m - 1) * K + k] += double(P_l);
                double W, D_t;
                if (opts.sample_from_quadrature) {
                    W = detail::sample_from_rule(wq[m - 1], rng);
                    D_t = detail::sample_from_rule(dq[m - 1][e.u_idx], rng);
                } else {
                    W = sample_wind(wind, m, rng);
                    D_t = sample_traditional_demand(trad, m, u, rng);
                }
                double v = table.price_grid[zeta.cell(wb(W), db(D_t), int(std::min<long>(P_l, table.P_max)))];
                long arrivals = rng.poisson(opp.kappa1(m));
                long present = arrivals + P_l;
                long active = rng.binomial(present, acceptance_prob(opp, v));
                double D_o = double(active) * opp.E_o;
                day_profit += realtime_profit_realized(params, dec, {W, D_t}, v, D_o);
                revenue += u * D_t + v * D_o;
                ++stats.events[int(classify_event(s, {W, D_t}, D_o).tag)];
                P_l = present - active;
            }
            P_carry = P_l;
        }
        sum += day_profit;
        sumsq += day_profit * day_profit;
    }

    stats.days = opts.n_days;
    stats.profit_mean = sum / opts.n_days;
    stats.profit_var =
        opts.n_days > 1 ? (sumsq - sum * sum / opts.n_days) / (opts.n_days - 1) : 0.0;
    stats.revenue_mean = revenue / opts.n_days;
    for (double& o : stats.occupancy) o /= double(opts.n_days);
    return stats;
}

}  // namespace windsched
