#pragma once

// Standard-normal helpers used throughout the schedulers: pdf, cdf, upper
// tail Q, quantile, and lower-truncated moments for the physical samplers.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace windsched {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;
inline constexpr double kSqrt2 = 1.4142135623730950488;

inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Upper tail Q(x) = P(Z > x).
inline double norm_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

// Inverse of norm_cdf. Acklam's rational approximation refined with one
// Halley step; accurate to ~1e-15 over (0, 1).
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("norm_quantile: p must be in [0, 1]");
    }
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

// Quantile of N(mu, sigma^2); degenerate sigma returns mu.
inline double norm_quantile(double p, double mu, double sigma) {
    if (sigma == 0.0) return mu;
    return mu + sigma * norm_quantile(p);
}

// Mean of N(mu, sigma^2) conditioned on X >= lo.
inline double truncated_normal_mean(double mu, double sigma, double lo) {
    if (sigma == 0.0) return mu >= lo ? mu : lo;
    double a = (lo - mu) / sigma;
    double z = norm_tail(a);
    if (z <= 0.0) return lo;  // all mass below lo in double precision
    return mu + sigma * norm_pdf(a) / z;
}

// Variance of N(mu, sigma^2) conditioned on X >= lo.
inline double truncated_normal_variance(double mu, double sigma, double lo) {
    if (sigma == 0.0) return 0.0;
    double a = (lo - mu) / sigma;
    double z = norm_tail(a);
    if (z <= 0.0) return 0.0;
    double h = norm_pdf(a) / z;
    return sigma * sigma * (1.0 + a * h - h * h);
}

}  // namespace windsched
