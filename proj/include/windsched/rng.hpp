#pragma once

// Deterministic random source for the simulators. Wraps std::mt19937_64 with
// hand-rolled variate transforms so that a given (seed, call sequence) pair
// produces the same stream on every platform; std::normal_distribution and
// friends are implementation-defined, which would break byte-identical
// reruns.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace windsched {

// splitmix64: used to decorrelate nearby seeds before they reach the engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Independent stream for a work item (sweep cell, replicate block, ...).
    static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(master_seed ^ splitmix64(index + 1));
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Marsaglia polar method; the spare deviate is kept for the next call.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

    // Poisson variate. Knuth's product method for small means, Hormann's
    // PTRS transformed rejection for large ones. lambda == 0 consumes no
    // randomness, so degenerate configurations stay in lockstep with their
    // non-degenerate twins.
    long poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("poisson: lambda < 0");
        if (lambda == 0.0) return 0;
        if (lambda < 30.0) return poisson_knuth(lambda);
        return poisson_ptrs(lambda);
    }

    // Counts successes one bernoulli at a time; n stays small in this code.
    long binomial(long n, double p) {
        if (n < 0) throw std::invalid_argument("binomial: n < 0");
        long k = 0;
        for (long i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
        return k;
    }

  private:
    long poisson_knuth(double lambda) {
        double limit = std::exp(-lambda);
        long k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    long poisson_ptrs(double lambda) {
        double b = 0.931 + 2.53 * std::sqrt(lambda);
        double a = -0.059 + 0.02483 * b;
        double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        double v_r = 0.9277 - 3.6224 / (b - 2.0);
        double log_lambda = std::log(lambda);
        for (;;) {
            double u = uniform01() - 0.5;
            double v = uniform01();
            double us = 0.5 - std::abs(u);
            double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= v_r) return long(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_lambda - lambda - std::lgamma(k + 1.0)) {
                return long(k);
            }
        }
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace windsched
