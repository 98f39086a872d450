#include "bora/engine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bora::engine {

std::vector<double> max_so_far_curve(const RunLog& log) {
    std::vector<double> curve;
    curve.reserve(log.samples.size());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : log.samples) {
        best = std::max(best, s.value);
        curve.push_back(best);
    }
    return curve;
}

std::vector<double> cumulative_regret(const RunLog& log, double f_star) {
    std::vector<double> regret;
    regret.reserve(log.samples.size());
    double best = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& s : log.samples) {
        best = std::max(best, s.value);
        total += f_star - best;
        regret.push_back(total);
    }
    return regret;
}

namespace {

double binom_coeff(int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * double(n - i) / double(i + 1);
    return c;
}

}  // namespace

SignTestResult sign_test(std::span<const double> regrets_a, std::span<const double> regrets_b,
                         int n_comparisons) {
    if (regrets_a.size() != regrets_b.size())
        throw std::invalid_argument("sign_test: paired inputs must have equal length");
    if (n_comparisons < 1) throw std::invalid_argument("sign_test: n_comparisons must be >= 1");

    SignTestResult result;
    for (std::size_t i = 0; i < regrets_a.size(); ++i) {
        if (regrets_a[i] < regrets_b[i])
            ++result.wins_a;
        else if (regrets_b[i] < regrets_a[i])
            ++result.wins_b;
        else
            ++result.ties;
    }
    const int n = result.wins_a + result.wins_b;
    if (n == 0) return result;  // all ties: undefined, reported as such

    const int w = std::max(result.wins_a, result.wins_b);
    double tail = 0.0;
    for (int k = w; k <= n; ++k) tail += binom_coeff(n, k);
    double p = 2.0 * tail * std::pow(0.5, n);
    result.p_raw = std::min(1.0, p);
    result.p_adjusted = std::min(1.0, result.p_raw * static_cast<double>(n_comparisons));
    result.defined = true;
    return result;
}

CurveStats aggregate_curves(const std::vector<std::vector<double>>& curves,
                            double stderr_multiplier) {
    if (curves.empty()) throw std::invalid_argument("aggregate_curves: no curves");
    const std::size_t len = curves.front().size();
    for (const auto& c : curves)
        if (c.size() != len)
            throw std::invalid_argument("aggregate_curves: curves have mismatched lengths");

    const double n = static_cast<double>(curves.size());
    CurveStats stats;
    stats.mean.resize(len);
    stats.stderr_of_mean.resize(len);
    stats.lo.resize(len);
    stats.hi.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        double mean = 0.0;
        for (const auto& c : curves) mean += c[i];
        mean /= n;
        double var = 0.0;
        for (const auto& c : curves) var += (c[i] - mean) * (c[i] - mean);
        var = curves.size() > 1 ? var / (n - 1.0) : 0.0;
        const double se = std::sqrt(var / n);
        stats.mean[i] = mean;
        stats.stderr_of_mean[i] = se;
        stats.lo[i] = mean - stderr_multiplier * se;
        stats.hi[i] = mean + stderr_multiplier * se;
    }
    return stats;
}

}  // namespace bora::engine
