#pragma once

// Scheduler for non-persistent opportunistic users. The real-time layer
// classifies each T2-slot into surplus/partial/deficit events, prices
// opportunistic demand in closed form, and the day-ahead layer picks (S, u)
// by splitting the expected profit into f1(u) + f2(s') + const.
//
// Notation used below:
//   s  = S/K        base-load energy per T2-slot
//   Y  = s + W - D_t  energy left for opportunistic users
//   y  = (Y - q_o(v)) / sigma_o(v)
//   c  = c_p - c1 + c2  composite cost of a cancelled-then-rebought unit

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "windsched/gaussian.hpp"
#include "windsched/market.hpp"
#include "windsched/models.hpp"
#include "windsched/quadrature.hpp"

namespace windsched {

// Observable real-time state of one T2-slot.
struct LowerState {
    double W = 0.0;    // wind realization
    double D_t = 0.0;  // traditional demand realization
};

struct DayAheadDecision {
    double S = 0.0;  // base-load procurement per T1-slot
    double u = 0.0;  // day-ahead retail price

    double s(const MarketParams& params) const { return S / params.K; }
};

enum class EventTag { A, B, C };

struct EventClass {
    EventTag tag = EventTag::B;
    double eps = 0.0;  // surplus energy W + s - (D_t + D_o)
};

// Event A: wind alone covers everything. Event C: committed base-load plus
// wind falls short. Event B: the in-between case, part of s cancelled.
inline EventClass classify_event(double s, const LowerState& state, double D_o) {
    EventClass ev;
    ev.eps = state.W + s - (state.D_t + D_o);
    if (state.W >= state.D_t + D_o)
        ev.tag = EventTag::A;
    else if (ev.eps < 0.0)
        ev.tag = EventTag::C;
    else
        ev.tag = EventTag::B;
    return ev;
}

// Realized profit of one T2-slot at a given opportunistic demand draw:
// revenue u D_t + v D_o minus the event-dependent dispatch cost.
inline double realtime_profit_realized(const MarketParams& params, const DayAheadDecision& dec,
                                       const LowerState& state, double v, double D_o) {
    double s = dec.s(params);
    EventClass ev = classify_event(s, state, D_o);
    double revenue = dec.u * state.D_t + v * D_o;
    switch (ev.tag) {
        case EventTag::A:
            // everything scheduled is cancelled
            return revenue - params.c_p * s;
        case EventTag::B:
            // cancel the surplus, dispatch the rest
            return revenue - params.c_p * ev.eps - params.c1 * (s - ev.eps);
        case EventTag::C:
        default:
            // dispatch all of s, buy the deficit at the peaking cost
            return revenue - params.c1 * s + params.c2 * ev.eps;
    }
}

// Dispatch cost of one T2-slot under the event accounting. Kept separate
// from realtime_profit_realized so profit == revenue - cost is a real
// crosscheck rather than a tautology.
inline double dispatch_cost(const MarketParams& params, double s, const LowerState& state,
                            double D_o) {
    EventClass ev = classify_event(s, state, D_o);
    switch (ev.tag) {
        case EventTag::A:
            return params.c_p * s;
        case EventTag::B:
            return params.c_p * ev.eps + params.c1 * (s - ev.eps);
        case EventTag::C:
        default:
            return params.c1 * s - params.c2 * ev.eps;
    }
}

struct ReducedProfit {
    double value = 0.0;
    bool condition_a_warning = false;  // wind might cover all demand
    double p_event_a = 0.0;            // P(W >= D_t + D_o) under the Gaussian surrogate
};

// Expected real-time profit over Gaussian opportunistic demand
// D_o ~ N(q_o(v), sigma_o^2(v)), assuming wind does not cover all demand:
//
//   R = u D_t - c1 s + c2 Y + (v - c2) q_o - c [ (Y - q_o) Phi(y) + sigma_o phi(y) ]
//
// The bracket is E[(Y - D_o)^+]. A degenerate sigma_o collapses it to
// (Y - q_o)^+, the certainty-equivalent form.
inline ReducedProfit realtime_profit_reduced(const MarketParams& params,
                                             const OpportunisticModel& opp, std::size_t m,
                                             const DayAheadDecision& dec, const LowerState& state,
                                             double v, double condition_a_threshold = 0.01) {
    double s = dec.s(params);
    double Y = s + state.W - state.D_t;
    DemandMoments mom = opportunistic_demand_moments(opp, m, v);
    double q = mom.mean;
    double sig = std::sqrt(mom.variance);
    double c = params.composite_cost();

    ReducedProfit out;
    double shortfall;  // E[(Y - D_o)^+]
    if (sig > 0.0) {
        double y = (Y - q) / sig;
        shortfall = (Y - q) * norm_cdf(y) + sig * norm_pdf(y);
        out.p_event_a = norm_cdf((state.W - state.D_t - q) / sig);
    } else {
        shortfall = std::max(Y - q, 0.0);
        out.p_event_a = (state.W - state.D_t - q) >= 0.0 ? 1.0 : 0.0;
    }
    out.value = dec.u * state.D_t - params.c1 * s + params.c2 * Y + (v - params.c2) * q - c * shortfall;
    out.condition_a_warning = out.p_event_a > condition_a_threshold;
    return out;
}

// Y-dependent part of the certainty-equivalent real-time objective,
// (v - c2) q_o(v) - c (Y - q_o(v))^+. Adding u D_t - c1 s + c2 Y gives the
// full certainty-equivalent profit.
inline double realtime_objective_ce(const MarketParams& params, const OpportunisticModel& opp,
                                    std::size_t m, double Y, double v) {
    double q = opportunistic_demand_moments(opp, m, v).mean;
    double c = params.composite_cost();
    return (v - params.c2) * q - c * std::max(Y - q, 0.0);
}

enum class PriceBranch { inelastic_cap, surplus, deficit, interior };

struct RealtimePrice {
    double v = 0.0;
    PriceBranch branch = PriceBranch::inelastic_cap;
    bool clamped = false;                // raw closed-form price fell outside [v_min, v_cap]
    bool nonpositive_surplus = false;    // c1 <= c_p made the surplus-branch price non-positive
};

// Closed-form real-time price. Inelastic users (-1 <= gamma_o < 0) see the
// cap, unless a cancellation fee above the day-ahead cost makes absorbing an
// oversized position at the clearing price worth more than capped revenue.
// Elastic users see one of three prices: a low "sell the surplus" price, a
// high "ration the deficit" price, or the price that sets expected
// opportunistic demand exactly equal to the leftover Y. Raw branch prices
// are clamped into [v_min, v_cap] and the branch conditions are evaluated
// at the clamped prices, which keeps the result the in-range argmax of the
// certainty-equivalent objective.
inline RealtimePrice realtime_price(const MarketParams& params, const OpportunisticModel& opp,
                                    std::size_t m, double Y) {
    RealtimePrice out;
    double g = opp.gamma_o;
    if (!(g < 0.0)) throw std::domain_error("realtime_price: gamma_o must be < 0");
    if (g >= -1.0) {
        out.v = params.v_cap;
        out.branch = PriceBranch::inelastic_cap;
        // With c_p <= c1 the cap is optimal at every position: a canceled
        // unit never costs more than a floor-priced sale recovers. When
        // c_p > c1 and the position overruns demand at the cap, absorbing
        // the excess at the clearing price can win. The objective rises up
        // to the clearing price and is U-shaped past it, so the clamped
        // clearing price is the only other candidate.
        if (params.c_p > params.c1) {
            std::optional<double> v_clear = q_o_inverse(opp, m, Y, params.v_cap);
            if (v_clear && *v_clear < params.v_cap) {
                double at_clear = realtime_objective_ce(params, opp, m, Y, *v_clear);
                double at_cap = realtime_objective_ce(params, opp, m, Y, params.v_cap);
                if (at_clear > at_cap) {
                    out.v = *v_clear;
                    out.branch = PriceBranch::interior;
                    out.clamped = *v_clear == opp.v_min &&
                                  Y > opportunistic_demand_moments(opp, m, opp.v_min).mean;
                }
            }
        }
        return out;
    }
    double ratio = g / (1.0 + g);  // > 1 for g < -1

    auto clamp_price = [&](double raw, bool* flagged_nonpositive) -> double {
        if (raw <= 0.0) {
            if (flagged_nonpositive) *flagged_nonpositive = true;
            out.clamped = true;
            return opp.v_min;
        }
        if (raw < opp.v_min) {
            out.clamped = true;
            return opp.v_min;
        }
        if (raw > params.v_cap) {
            out.clamped = true;
            return params.v_cap;
        }
        return raw;
    };

    double v_surplus = clamp_price(ratio * (params.c1 - params.c_p), &out.nonpositive_surplus);
    if (Y >= opportunistic_demand_moments(opp, m, v_surplus).mean) {
        out.v = v_surplus;
        out.branch = PriceBranch::surplus;
        return out;
    }
    out.clamped = false;  // surplus-branch clamping is moot once that branch is rejected
    out.nonpositive_surplus = false;
    double v_deficit = clamp_price(ratio * params.c2, nullptr);
    if (Y < opportunistic_demand_moments(opp, m, v_deficit).mean) {
        out.v = v_deficit;
        out.branch = PriceBranch::deficit;
        return out;
    }
    out.clamped = false;
    // Interior: match expected demand to Y. Y > 0 here because the deficit
    // test already caught Y below q_o(v_deficit) >= 0.
    std::optional<double> v = q_o_inverse(opp, m, Y, params.v_cap);
    if (!v) {  // Y <= 0 can only slip through when there are no arrivals at all
        out.v = v_deficit;
        out.branch = PriceBranch::deficit;
        return out;
    }
    out.v = *v;
    out.branch = PriceBranch::interior;
    return out;
}

// Brute-force argmax of the certainty-equivalent objective on a uniform
// price grid. Test plumbing for realtime_price.
inline double realtime_price_oracle(const MarketParams& params, const OpportunisticModel& opp,
                                    std::size_t m, double Y, int grid_points = 2001) {
    if (grid_points < 2) throw std::invalid_argument("realtime_price_oracle: need >= 2 grid points");
    double best_v = opp.v_min;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        double v = opp.v_min + (params.v_cap - opp.v_min) * double(i) / (grid_points - 1);
        double val = realtime_objective_ce(params, opp, m, Y, v);
        if (val > best_val) {
            best_val = val;
            best_v = v;
        }
    }
    return best_v;
}

// Profit-maximizing price for a power-law demand with elasticity gamma and
// marginal cost c1: the cap when inelastic, (gamma/(1+gamma)) c1 otherwise,
// clamped to (0, u_cap].
inline double elastic_monopoly_price(const MarketParams& params, double gamma) {
    if (!(gamma < 0.0)) throw std::domain_error("elastic_monopoly_price: gamma must be < 0");
    if (gamma >= -1.0) return params.u_cap;
    double u = (gamma / (1.0 + gamma)) * params.c1;
    return std::min(u, params.u_cap);
}

// Day-ahead price for traditional users. Inelastic demand pushes the price
// to the cap; elastic demand has the interior optimum (gamma/(1+gamma)) c1.
inline double dayahead_u_star(const MarketParams& params, const TraditionalDemandModel& trad,
                              std::size_t m) {
    detail::require_slot(m, trad.slots(), "dayahead_u_star");
    return elastic_monopoly_price(params, trad.gamma_t[m - 1]);
}

// f1(u) = alpha_t (u - c1) u^{gamma_t}: expected margin on traditional users.
inline double f1(const MarketParams& params, const TraditionalDemandModel& trad, std::size_t m,
                 double u) {
    return (u - params.c1) * traditional_demand_mean(trad, m, u);
}

// f2(s') = E_Z[(v - c2) q_o(v) - c (Y - q_o(v))^+] + (c2 - c1) s' with
// Y = s' + Z, Z = W - eps_t ~ N(theta_m, sigma^2 + sigma_t^2) and v the
// closed-form real-time price at Y. The bracket is the certainty-equivalent
// objective the real-time price maximizes; evaluating the day-ahead surface
// in the same regime keeps the quantile closed form for S* exact. The two
// Gaussian sources enter only through their difference, so the quadrature
// runs over the convolved variable.
inline double f2(const MarketParams& params, const OpportunisticModel& opp, const WindModel& wind,
                 double sigma_t, std::size_t m, double s_prime, int quad_nodes = 64) {
    detail::require_slot(m, wind.slots(), "f2");
    double sigma_z = std::sqrt(wind.sigma * wind.sigma + sigma_t * sigma_t);
    QuadRule rule = normal_quadrature(wind.theta[m - 1], sigma_z, quad_nodes);
    double acc = rule.expect([&](double z) {
        double Y = s_prime + z;
        double v = realtime_price(params, opp, m, Y).v;
        return realtime_objective_ce(params, opp, m, Y, v);
    });
    return acc + (params.c2 - params.c1) * s_prime;
}

struct SStarOptions {
    int quad_nodes = 64;
    int scan_points = 129;       // coarse unimodality scan
    int fallback_points = 4097;  // dense scan when the coarse scan is multi-modal
};

struct SStarResult {
    double S = 0.0;        // per-T1-slot procurement, K * (s' + mean traditional demand)
    double s_prime = 0.0;  // per-T2-slot net procurement above mean traditional demand
    double u = 0.0;        // day-ahead price the result is paired with
    bool used_closed_form = false;
    bool grid_fallback_warning = false;  // coarse scan saw multiple local maxima
};

// Optimal day-ahead procurement for slot m given the day-ahead price.
// Inelastic opportunistic users admit the quantile closed form as long as
// the cancellation fee stays at or below the day-ahead cost (so the cap is
// the real-time price at every position); elastic users, and inelastic ones
// facing a steeper fee, need a one-dimensional search over s'.
inline SStarResult dayahead_S_star(const MarketParams& params, const WindModel& wind,
                                   const TraditionalDemandModel& trad, const OpportunisticModel& opp,
                                   std::size_t m, double u_star, SStarOptions opts = {}) {
    detail::require_slot(m, wind.slots(), "dayahead_S_star");
    if (!(params.c_p > 0.0))
        throw std::domain_error("dayahead_S_star: c_p = 0 makes day-ahead procurement unbounded");
    double mean_dt = traditional_demand_mean(trad, m, u_star);
    double sigma_z = std::sqrt(wind.sigma * wind.sigma + trad.sigma_t * trad.sigma_t);
    double theta = wind.theta[m - 1];
    double c = params.composite_cost();

    SStarResult out;
    out.u = u_star;

    if (opp.kappa1(m) == 0.0 || (opp.gamma_o >= -1.0 && params.c_p <= params.c1)) {
        // Inelastic users see the cap at every position when the fee stays
        // at or below the day-ahead cost, so expected opportunistic demand
        // is a constant and s'* is the c_p/c quantile shift below it. A
        // zero arrival rate degenerates to the same form with q = 0
        // whatever the fee and elasticity.
        double q = opportunistic_demand_moments(opp, m, params.v_cap).mean;
        out.s_prime = q - norm_quantile(params.c_p / c, theta, sigma_z);
        out.used_closed_form = true;
    } else {
        // Search range: below the smallest expected demand (at the cap)
        // minus a few sigma the slope is +(c2 - c1), above the largest (at
        // the floor) plus a few sigma it is -c_p, so the maximizer lives in
        // between.
        double q_small = opportunistic_demand_moments(opp, m, params.v_cap).mean;
        double q_large = opportunistic_demand_moments(opp, m, opp.v_min).mean;
        double pad = 8.0 * sigma_z + 1.0;
        double lo = std::max(-mean_dt, q_small - theta - pad);
        double hi = q_large - theta + pad;
        if (hi <= lo) hi = lo + 1.0;

        auto objective = [&](double sp) { return f2(params, opp, wind, trad.sigma_t, m, sp, opts.quad_nodes); };

        // Coarse scan for bracketing and unimodality detection.
        int n = std::max(opts.scan_points, 5);
        std::vector<double> xs(n), fs(n);
        int best = 0;
        int local_maxima = 0;
        for (int i = 0; i < n; ++i) {
            xs[i] = lo + (hi - lo) * double(i) / (n - 1);
            fs[i] = objective(xs[i]);
            if (fs[i] > fs[best]) best = i;
        }
        for (int i = 1; i + 1 < n; ++i)
            if (fs[i] > fs[i - 1] && fs[i] > fs[i + 1]) ++local_maxima;

        if (local_maxima > 1) {
            out.grid_fallback_warning = true;
            int fn = std::max(opts.fallback_points, n);
            double fbest_x = xs[best], fbest = fs[best];
            for (int i = 0; i < fn; ++i) {
                double x = lo + (hi - lo) * double(i) / (fn - 1);
                double fx = objective(x);
                if (fx > fbest) {
                    fbest = fx;
                    fbest_x = x;
                }
            }
            out.s_prime = fbest_x;
        } else {
            // Golden-section inside the bracketing interval around the scan max.
            double a = xs[std::max(best - 1, 0)];
            double b = xs[std::min(best + 1, n - 1)];
            const double gr = 0.6180339887498949;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1v = objective(x1), f2v = objective(x2);
            for (int it = 0; it < 200 && (b - a) > 1e-10 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
                if (f1v < f2v) {
                    a = x1;
                    x1 = x2;
                    f1v = f2v;
                    x2 = a + gr * (b - a);
                    f2v = objective(x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2v = f1v;
                    x1 = b - gr * (b - a);
                    f1v = objective(x1);
                }
            }
            out.s_prime = 0.5 * (a + b);
        }
    }

    // Feasibility: S >= 0, i.e. s' >= -mean traditional demand.
    if (out.s_prime < -mean_dt) out.s_prime = -mean_dt;
    out.S = params.K * (out.s_prime + mean_dt);
    if (out.S < 0.0) out.S = 0.0;
    return out;
}

// Probability that wind covers mean traditional demand plus full-acceptance
// opportunistic demand: the statistical guardrail for "wind generation is
// not sufficient" assumed by the reduced profit forms.
inline double condition_a_prob(const WindModel& wind, const OpportunisticModel& opp,
                               std::size_t m, double mean_dt) {
    detail::require_slot(m, wind.slots(), "condition_a_prob");
    double threshold = mean_dt + opportunistic_demand_moments(opp, m, opp.v_min).mean;
    if (wind.sigma == 0.0) return wind.theta[m - 1] >= threshold ? 1.0 : 0.0;
    return norm_tail((threshold - wind.theta[m - 1]) / wind.sigma);
}

}  // namespace windsched
