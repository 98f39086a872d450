#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bora/engine/run.hpp"

namespace bora::engine {

// Best value found after each evaluated sample.
std::vector<double> max_so_far_curve(const RunLog& log);

// R_i = sum_{k<=i} (f_star - y_k^max), computed per sample index so
// multi-point steps are charged fairly.
std::vector<double> cumulative_regret(const RunLog& log, double f_star);

struct SignTestResult {
    bool defined = false;  // false when every pair ties
    int wins_a = 0;        // tasks where a has lower regret
    int wins_b = 0;
    int ties = 0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;  // Bonferroni: min(1, p_raw * n_comparisons)
};

// Two-sided binomial sign test on paired per-task values (lower is better);
// ties are dropped from the effective n.
SignTestResult sign_test(std::span<const double> regrets_a, std::span<const double> regrets_b,
                         int n_comparisons);

struct CurveStats {
    std::vector<double> mean;
    std::vector<double> stderr_of_mean;
    std::vector<double> lo;  // mean - multiplier * stderr
    std::vector<double> hi;
};

// Mean and standard-error band across trial curves; all curves must share a
// length. The band multiplier defaults to the plotting convention of 0.25.
CurveStats aggregate_curves(const std::vector<std::vector<double>>& curves,
                            double stderr_multiplier = 0.25);

}  // namespace bora::engine
