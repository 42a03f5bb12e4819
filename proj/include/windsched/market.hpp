#pragma once

// Market constants shared by every layer: the two generation cost rates, the
// cancellation penalty, retail price caps, and the two-timescale slot
// structure (M day-ahead slots per day, K real-time slots per day-ahead
// slot).

#include <stdexcept>
#include <string>

namespace windsched {

struct MarketParams {
    double c1 = 0.0;     // base-load energy cost, committed day-ahead
    double c2 = 0.0;     // peaking energy cost, bought in real time
    double c_p = 0.0;    // penalty per unit of cancelled day-ahead energy
    double u_cap = 0.0;  // retail price cap, day-ahead (traditional) side
    double v_cap = 0.0;  // retail price cap, real-time (opportunistic) side
    int M = 1;           // day-ahead slots per day
    int K = 1;           // real-time slots per day-ahead slot

    // Composite penalty rate c = c_p - c1 + c2; the real-time layer prices
    // against it and every formula here assumes it is positive.
    double composite_cost() const { return c_p - c1 + c2; }

    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("MarketParams: " + msg); };
        if (!(c1 > 0.0)) fail("c1 must be > 0");
        if (!(c2 > c1)) fail("c2 must exceed c1");
        if (!(c_p >= 0.0)) fail("c_p must be >= 0");
        if (!(composite_cost() > 0.0)) fail("c_p - c1 + c2 must be > 0");
        if (!(u_cap > 0.0)) fail("u_cap must be > 0");
        if (!(v_cap > 0.0)) fail("v_cap must be > 0");
        if (M < 2) fail("M must be > 1");
        if (K < 2) fail("K must be > 1");
    }
};

}  // namespace windsched
