#pragma once

// The three stochastic primitives of the market: wind generation, price-
// elastic traditional demand, and opportunistic users who arrive as a
// Poisson stream and accept or reject the posted real-time price.
//
// Closed-form work elsewhere uses the untruncated Gaussian moments; the
// samplers truncate at zero because negative generation or demand is
// unphysical. Slot indices m are 1-based throughout, matching the
// day-ahead slot numbering used by the schedulers.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "windsched/rng.hpp"

namespace windsched {

namespace detail {

inline void require_slot(std::size_t m, std::size_t M, const char* who) {
    if (m < 1 || m > M) throw std::domain_error(std::string(who) + ": slot index out of range");
}

inline double sample_truncated_normal(Rng& rng, double mu, double sigma) {
    if (sigma == 0.0) return mu < 0.0 ? 0.0 : mu;
    double x;
    do {
        x = rng.normal(mu, sigma);
    } while (x < 0.0);
    return x;
}

}  // namespace detail

// Wind energy per T2-slot, W ~ N(theta_m, sigma^2) truncated below at 0.
struct WindModel {
    std::vector<double> theta;  // one mean per T1-slot
    double sigma = 0.0;

    std::size_t slots() const { return theta.size(); }

    void validate() const {
        if (theta.empty()) throw std::invalid_argument("WindModel: theta array empty");
        for (double t : theta)
            if (!(t >= 0.0)) throw std::invalid_argument("WindModel: theta_m must be >= 0");
        if (!(sigma >= 0.0)) throw std::invalid_argument("WindModel: sigma must be >= 0");
    }
};

inline double sample_wind(const WindModel& model, std::size_t m, Rng& rng) {
    detail::require_slot(m, model.slots(), "sample_wind");
    return detail::sample_truncated_normal(rng, model.theta[m - 1], model.sigma);
}

// Traditional (firm) demand per T2-slot: D_t = alpha_t u^{gamma_t} + eps_t,
// eps_t ~ N(0, sigma_t^2), truncated so realized demand stays >= 0.
struct TraditionalDemandModel {
    std::vector<double> alpha_t;
    std::vector<double> gamma_t;
    double sigma_t = 0.0;

    std::size_t slots() const { return alpha_t.size(); }

    void validate() const {
        if (alpha_t.empty() || alpha_t.size() != gamma_t.size())
            throw std::invalid_argument("TraditionalDemandModel: alpha_t/gamma_t size mismatch");
        for (double a : alpha_t)
            if (!(a >= 0.0)) throw std::invalid_argument("TraditionalDemandModel: alpha_t must be >= 0");
        for (double g : gamma_t)
            if (!(g < 0.0)) throw std::invalid_argument("TraditionalDemandModel: gamma_t must be < 0");
        if (!(sigma_t >= 0.0)) throw std::invalid_argument("TraditionalDemandModel: sigma_t must be >= 0");
    }
};

inline double traditional_demand_mean(const TraditionalDemandModel& model, std::size_t m, double u) {
    detail::require_slot(m, model.slots(), "traditional_demand_mean");
    if (!(u > 0.0)) throw std::domain_error("traditional_demand_mean: price must be > 0");
    return model.alpha_t[m - 1] * std::pow(u, model.gamma_t[m - 1]);
}

inline double sample_traditional_demand(const TraditionalDemandModel& model, std::size_t m, double u,
                                        Rng& rng) {
    double mean = traditional_demand_mean(model, m, u);
    return detail::sample_truncated_normal(rng, mean, model.sigma_t);
}

// Opportunistic users: Poisson arrivals at rate lambda_o per unit time, each
// present for one T2-slot, accepting price v with probability
// P(V >= v) = alpha_o v^{gamma_o} (clamped to 1 below v_min), and consuming
// E_o units when active.
struct OpportunisticModel {
    std::vector<double> lambda_o;
    double T2 = 1.0;
    double gamma_o = -1.0;
    double v_min = 1.0;
    double E_o = 1.0;

    std::size_t slots() const { return lambda_o.size(); }

    // alpha_o is pinned by "all users accept at v_min": alpha_o v_min^{gamma_o} = 1.
    double alpha_o() const { return std::pow(v_min, -gamma_o); }

    // Mean number of arrivals in one T2-slot.
    double kappa1(std::size_t m) const {
        detail::require_slot(m, slots(), "OpportunisticModel::kappa1");
        return lambda_o[m - 1] * T2;
    }

    void validate() const {
        if (lambda_o.empty()) throw std::invalid_argument("OpportunisticModel: lambda_o array empty");
        for (double l : lambda_o)
            if (!(l >= 0.0)) throw std::invalid_argument("OpportunisticModel: lambda_o must be >= 0");
        if (!(T2 > 0.0)) throw std::invalid_argument("OpportunisticModel: T2 must be > 0");
        if (!(gamma_o < 0.0)) throw std::invalid_argument("OpportunisticModel: gamma_o must be < 0");
        if (!(v_min > 0.0)) throw std::invalid_argument("OpportunisticModel: v_min must be > 0");
        if (!(E_o > 0.0)) throw std::invalid_argument("OpportunisticModel: E_o must be > 0");
    }
};

inline double acceptance_prob(const OpportunisticModel& model, double v) {
    if (!(v > 0.0)) throw std::domain_error("acceptance_prob: price must be > 0");
    double p = model.alpha_o() * std::pow(v, model.gamma_o);
    return p > 1.0 ? 1.0 : p;
}

struct DemandMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Gaussian surrogate for aggregate opportunistic demand in one T2-slot:
// thinned-Poisson count times E_o gives mean kappa1 p E_o and variance
// kappa1 p E_o^2 (mean = variance for the count itself).
inline DemandMoments opportunistic_demand_moments(const OpportunisticModel& model, std::size_t m,
                                                  double v) {
    double p = acceptance_prob(model, v);
    double rate = model.kappa1(m) * p;
    return {rate * model.E_o, rate * model.E_o * model.E_o};
}

// Inverts q_o on its elastic range and clamps the result into
// [v_min, v_cap]. Y <= 0 means no price can shrink expected demand to Y:
// the caller is in the deficit branch, signalled by nullopt.
inline std::optional<double> q_o_inverse(const OpportunisticModel& model, std::size_t m, double Y,
                                         double v_cap) {
    detail::require_slot(m, model.slots(), "q_o_inverse");
    if (!(Y > 0.0)) return std::nullopt;
    double scale = model.kappa1(m) * model.alpha_o() * model.E_o;
    if (!(scale > 0.0)) return v_cap;  // no opportunistic demand at all; any price works
    double v = std::pow(Y / scale, 1.0 / model.gamma_o);
    if (v < model.v_min) v = model.v_min;
    if (v > v_cap) v = v_cap;
    return v;
}

}  // namespace windsched
