#pragma once

#include <vector>

#include "bora/core/dataset.hpp"
#include "bora/core/rng.hpp"
#include "bora/surrogate/gp.hpp"

namespace bora::surrogate {

// Fixed set of q points where GP uncertainty is averaged; sampled once
// before the optimization starts and never changed afterwards.
struct MonitorSet {
    std::vector<core::Point> points;

    static MonitorSet make(const core::SearchSpace& space, core::Rng& rng, std::size_t q);
};

// Closed-form expected improvement over y_best for a N(mean, std^2)
// prediction; collapses to max(0, mean - y_best) when std < 1e-12.
double expected_improvement(double mean, double std, double y_best);
double expected_improvement(const GpModel& model, const core::Point& p, double y_best);

// Mean posterior std over the monitor set.
double mean_uncertainty(const GpModel& model, const MonitorSet& monitor);

// Max posterior std over the monitor set (feeds the running-max threshold).
double max_uncertainty(const GpModel& model, const MonitorSet& monitor);

struct ProposeOptions {
    std::size_t continuous_seeds = 2048;  // uniform EI seeds on continuous spaces
    std::size_t refine_top = 16;          // seeds refined by local pattern search
    std::size_t discrete_candidates = 4096;
};

// Top-n EI candidates. Continuous spaces: multi-start seeding plus local
// refinement. Discrete or constrained spaces: rank a feasible sample drawn
// through core::sample_uniform. Points are pairwise distinct by canonical
// key; `exclude` removes already-evaluated points from the discrete pool.
std::vector<core::Point> propose_candidates(const GpModel& model, const core::SearchSpace& space,
                                            std::size_t n, core::Rng& rng,
                                            const core::Dataset* exclude = nullptr,
                                            const ProposeOptions& options = {});

}  // namespace bora::surrogate
