#include "bora/surrogate/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace bora::surrogate {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

bool needs_feasible_sampling(const core::SearchSpace& space) {
    if (!space.constraints().empty()) return true;
    for (const auto& v : space.variables())
        if (v.kind == core::VarKind::Discrete) return true;
    return false;
}

}  // namespace

MonitorSet MonitorSet::make(const core::SearchSpace& space, core::Rng& rng, std::size_t q) {
    return MonitorSet{core::sample_uniform(space, rng, q)};
}

double expected_improvement(double mean, double std, double y_best) {
    if (std < 1e-12) return std::max(0.0, mean - y_best);
    const double z = (mean - y_best) / std;
    return (mean - y_best) * normal_cdf(z) + std * normal_pdf(z);
}

double expected_improvement(const GpModel& model, const core::Point& p, double y_best) {
    const Posterior post = model.posterior(p);
    return expected_improvement(post.mean, post.std, y_best);
}

double mean_uncertainty(const GpModel& model, const MonitorSet& monitor) {
    if (monitor.points.empty()) throw std::invalid_argument("mean_uncertainty: empty monitor set");
    std::vector<double> means, stds;
    model.posterior_batch(monitor.points, means, stds);
    double sum = 0.0;  // serial reduction keeps the result thread-count independent
    for (double s : stds) sum += s;
    return sum / static_cast<double>(stds.size());
}

double max_uncertainty(const GpModel& model, const MonitorSet& monitor) {
    if (monitor.points.empty()) throw std::invalid_argument("max_uncertainty: empty monitor set");
    std::vector<double> means, stds;
    model.posterior_batch(monitor.points, means, stds);
    double best = 0.0;
    for (double s : stds) best = std::max(best, s);
    return best;
}

namespace {

// Compass search over EI starting from a seed; per-dimension steps are
// scaled to the variable ranges and halved on failure.
core::Point refine_continuous(const GpModel& model, const core::SearchSpace& space,
                              core::Point start, double y_best) {
    const auto& vars = space.variables();
    const std::size_t d = vars.size();
    std::vector<double> span(d);
    for (std::size_t i = 0; i < d; ++i) span[i] = vars[i].upper - vars[i].lower;

    core::Point best = std::move(start);
    double best_ei = expected_improvement(model, best, y_best);
    double scale = 0.05;
    for (int iter = 0; iter < 60 && scale > 1e-5; ++iter) {
        bool improved = false;
        for (std::size_t i = 0; i < d; ++i) {
            for (double sign : {+1.0, -1.0}) {
                core::Point cand = best;
                cand[i] = std::clamp(cand[i] + sign * scale * span[i], vars[i].lower, vars[i].upper);
                const double ei = expected_improvement(model, cand, y_best);
                if (ei > best_ei) {
                    best = std::move(cand);
                    best_ei = ei;
                    improved = true;
                }
            }
        }
        if (!improved) scale *= 0.5;
    }
    return best;
}

std::vector<core::Point> top_distinct(const core::SearchSpace& space,
                                      std::vector<core::Point>& pool, std::vector<double>& ei,
                                      std::size_t n) {
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ei[a] > ei[b]; });
    std::vector<core::Point> out;
    std::unordered_set<std::string> keys;
    for (std::size_t idx : order) {
        if (out.size() == n) break;
        std::string key = core::canonical_key(space, pool[idx]);
        if (!keys.insert(std::move(key)).second) continue;
        out.push_back(std::move(pool[idx]));
    }
    return out;
}

}  // namespace

std::vector<core::Point> propose_candidates(const GpModel& model, const core::SearchSpace& space,
                                            std::size_t n, core::Rng& rng,
                                            const core::Dataset* exclude,
                                            const ProposeOptions& options) {
    if (n == 0) throw std::invalid_argument("propose_candidates: n must be >= 1");
    const double best = model.train_y_max();

    if (needs_feasible_sampling(space)) {
        std::vector<core::Point> pool =
            core::sample_uniform(space, rng, options.discrete_candidates, exclude);
        std::vector<double> means, stds;
        model.posterior_batch(pool, means, stds);
        std::vector<double> ei(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i)
            ei[i] = expected_improvement(means[i], stds[i], best);
        return top_distinct(space, pool, ei, n);
    }

    std::vector<core::Point> seeds = core::sample_uniform(space, rng, options.continuous_seeds);
    std::vector<double> means, stds;
    model.posterior_batch(seeds, means, stds);
    std::vector<double> seed_ei(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seed_ei[i] = expected_improvement(means[i], stds[i], best);

    std::vector<std::size_t> order(seeds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return seed_ei[a] > seed_ei[b]; });

    const std::size_t n_refine = std::min(options.refine_top, seeds.size());
    std::vector<core::Point> refined(n_refine);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < n_refine; ++r)
        refined[r] = refine_continuous(model, space, seeds[order[r]], best);

    // pool refined points with all seeds so the result can never fall below
    // the best seed
    std::vector<core::Point> pool = std::move(refined);
    std::vector<double> pool_ei(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        pool_ei[i] = expected_improvement(model, pool[i], best);
    pool.insert(pool.end(), seeds.begin(), seeds.end());
    pool_ei.insert(pool_ei.end(), seed_ei.begin(), seed_ei.end());
    return top_distinct(space, pool, pool_ei, n);
}

}  // namespace bora::surrogate
