// Solves the day-ahead problem for a small market, then walks through one
// simulated day slot by slot: wind draw, demand draw, real-time price,
// opportunistic arrivals, and the realized profit with its event class.

#include <cstdio>

#include <windsched/windsched.hpp>

using namespace windsched;

int main() {
    MarketParams params;
    params.c1 = 1.0;
    params.c2 = 2.0;
    params.c_p = 0.5;
    params.u_cap = 4.0;
    params.v_cap = 8.0;
    params.M = 3;
    params.K = 4;

    WindModel wind;
    wind.theta = {4.0, 6.0, 5.0};
    wind.sigma = 1.5;

    TraditionalDemandModel trad;
    trad.alpha_t = {40.0, 40.0, 40.0};
    trad.gamma_t = {-2.0, -2.0, -2.0};
    trad.sigma_t = 0.8;

    OpportunisticModel opp;
    opp.lambda_o = {4.0, 4.0, 4.0};
    opp.T2 = 1.0;
    opp.gamma_o = -2.0;
    opp.v_min = 0.5;
    opp.E_o = 0.5;

    Rng rng(2024);
    double day_profit = 0.0;
    for (std::size_t m = 1; m <= params.M; ++m) {
        double u = dayahead_u_star(params, trad, m);
        SStarResult sol = dayahead_S_star(params, wind, trad, opp, m, u);
        DayAheadDecision dec{sol.S, u};
        double s = dec.s(params);
        std::printf("T1-slot %zu: u* = %.4f, S* = %.4f (s = %.4f per T2-slot)\n", m, u, sol.S, s);

        for (std::size_t k = 1; k <= params.K; ++k) {
            LowerState st;
            st.W = sample_wind(wind, m, rng);
            st.D_t = sample_traditional_demand(trad, m, u, rng);
            double Y = s + st.W - st.D_t;
            RealtimePrice rp = realtime_price(params, opp, m, Y);
            long arrivals = rng.poisson(opp.kappa1(m));
            long active = rng.binomial(arrivals, acceptance_prob(opp, rp.v));
            double D_o = double(active) * opp.E_o;
            double profit = realtime_profit_realized(params, dec, st, rp.v, D_o);
            EventClass ev = classify_event(s, st, D_o);
            const char* tag = ev.tag == EventTag::A ? "A" : ev.tag == EventTag::B ? "B" : "C";
            std::printf("  k=%zu  W=%6.2f D_t=%6.2f Y=%6.2f  v=%6.3f  accepted %ld/%ld"
                        "  profit %7.3f  event %s\n",
                        k, st.W, st.D_t, Y, rp.v, active, arrivals, profit, tag);
            day_profit += profit;
        }
    }
    std::printf("day profit: %.3f\n", day_profit);
    return 0;
}
