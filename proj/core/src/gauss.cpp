#include "iganitsche/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace iga {

namespace {

GaussRule compute_rule(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: need at least one point");
    }
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);

    // Roots of P_n by Newton from the Chebyshev-like initial guess; the
    // rule is symmetric, so only the lower half is iterated.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P_n'(x).
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.weights[i] = w;
        rule.points[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.points[n / 2] = 0.0;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int num_points) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find(num_points);
    if (it == cache.end()) {
        it = cache.emplace(num_points, compute_rule(num_points)).first;
    }
    return it->second;
}

}  // namespace iga
