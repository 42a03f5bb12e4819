#pragma once

// Gauss-Hermite quadrature for expectations against Gaussian densities.
// Nodes and weights come from the standard Newton iteration on the Hermite
// recurrence; a rule with n nodes integrates polynomials up to degree 2n-1
// exactly, which is plenty for the smooth integrands in the schedulers.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace windsched {

struct QuadRule {
    std::vector<double> points;
    std::vector<double> weights;  // sum to 1

    std::size_t size() const { return points.size(); }

    // Expectation of f under the measure the rule represents.
    template <typename F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * f(points[i]);
        return acc;
    }
};

namespace detail {

// Physicists' Gauss-Hermite abscissas/weights for weight exp(-x^2), by the
// Golub-Welsch construction: the abscissas are the eigenvalues of the Jacobi
// matrix of the orthonormal Hermite recurrence (zero diagonal, off-diagonal
// sqrt(j/2)) and each weight is sqrt(pi) times the squared first component
// of the corresponding eigenvector. QL iteration with implicit shifts stays
// accurate at node counts where Newton root-marching drifts onto wrong
// roots. Abscissas come back in increasing order.
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> d(n, 0.0);   // diagonal, becomes the eigenvalues
    std::vector<double> e(n, 0.0);   // e[i] couples i and i+1
    std::vector<double> z(n, 0.0);   // first row of the eigenvector matrix
    for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(0.5 * (i + 1));
    z[0] = 1.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("gauss_hermite: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i], b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    double zi = z[i], zi1 = z[i + 1];
                    z[i + 1] = s * zi + c * zi1;
                    z[i] = c * zi - s * zi1;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    const double sqrt_pi = 1.7724538509055160273;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        x[i] = d[order[i]];
        w[i] = sqrt_pi * z[order[i]] * z[order[i]];
    }
}

struct HermiteRule {
    std::vector<double> x, w;
};

// The rule depends only on n; memoize per thread so evaluation loops do not
// redo the eigen decomposition for every integrand.
inline const HermiteRule& hermite_rule(int n) {
    thread_local std::map<int, HermiteRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        HermiteRule rule;
        gauss_hermite(n, rule.x, rule.w);
        it = cache.emplace(n, std::move(rule)).first;
    }
    return it->second;
}

}  // namespace detail

// Quadrature rule for E[f(X)], X ~ N(mu, sigma^2). Weights are normalised to
// sum to one exactly so downstream transition kernels stay stochastic.
// sigma == 0 collapses to a single node at the mean. Points are returned in
// increasing order.
inline QuadRule normal_quadrature(double mu, double sigma, int n) {
    if (sigma < 0.0) throw std::invalid_argument("normal_quadrature: sigma < 0");
    if (n < 1) throw std::invalid_argument("normal_quadrature: need n >= 1");
    QuadRule rule;
    if (sigma == 0.0 || n == 1) {
        rule.points = {mu};
        rule.weights = {1.0};
        return rule;
    }
    const detail::HermiteRule& hr = detail::hermite_rule(n);
    double wsum = 0.0;
    for (double wi : hr.w) wsum += wi;  // = sqrt(pi) up to roundoff
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.points[i] = mu + std::sqrt(2.0) * sigma * hr.x[i];
        rule.weights[i] = hr.w[i] / wsum;
    }
    return rule;
}

}  // namespace windsched
