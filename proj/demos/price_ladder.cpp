// Prints the closed-form real-time price as a function of leftover energy
// Y = s + W - D_t, showing the three-regime ladder for elastic users: a low
// surplus-clearing price, an interior stretch where the price tracks Y, and
// a high deficit price.

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
    params.M = 2;
    params.K = 2;

    OpportunisticModel opp;
    opp.lambda_o = {3.0, 3.0};
    opp.T2 = 1.0;
    opp.gamma_o = -2.0;
    opp.v_min = 0.5;
    opp.E_o = 1.0;

    std::printf("%10s %10s %10s  %s\n", "Y", "price", "q_o(v)", "branch");
    const char* names[] = {"cap", "surplus", "deficit", "interior"};
    for (double Y = -1.0; Y <= 13.01; Y += 0.5) {
        RealtimePrice rp = realtime_price(params, opp, 1, Y);
        double q = opportunistic_demand_moments(opp, 1, rp.v).mean;
        std::printf("%10.2f %10.4f %10.4f  %s%s\n", Y, rp.v, q, names[int(rp.branch)],
                    rp.clamped ? " (clamped)" : "");
    }
    return 0;
}
