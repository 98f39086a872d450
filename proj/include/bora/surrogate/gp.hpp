#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

#include "bora/core/dataset.hpp"
#include "bora/core/rng.hpp"
#include "bora/core/space.hpp"
#include "bora/surrogate/kernel.hpp"

namespace bora::surrogate {

struct Posterior {
    double mean = 0.0;
    double std = 0.0;
};

struct FitOptions {
    int restarts = 8;        // additional random starts beyond the default start
    int max_iters = 40;      // gradient steps per start
    double grad_tol = 1e-5;  // stop when the projected gradient inf-norm drops below
    std::uint64_t seed = 0;  // start-point draws
    bool parallel = true;    // optimize starts across OpenMP threads
};

/**
 * Gaussian-process regression model. Inputs are normalized to the unit cube
 * using the space bounds; targets are standardized to zero mean / unit
 * variance. Immutable once built, so posterior queries are safe from any
 * number of threads.
 */
class GpModel {
public:
    // Maximize log marginal likelihood by multi-start projected gradient
    // ascent. Starts are drawn up front so the parallel and serial paths
    // pick the same optimum (ordered argmax over identical start results).
    static GpModel fit(const core::Dataset& dataset, const FitOptions& options = {});

    // Condition on the dataset with fixed hyperparameters (no optimization).
    static GpModel from_params(const core::Dataset& dataset, const KernelParams& params);

    // Data-free model: posterior equals the prior (mean 0, std = signal scale).
    static GpModel prior(const core::SearchSpace& space, const KernelParams& params);

    Posterior posterior(const core::Point& p) const;

    // Batch posterior over many points; the workhorse behind uncertainty
    // monitoring and candidate scoring. OpenMP-parallel over points, each
    // point independent, so results are identical to the serial reference.
    void posterior_batch(const std::vector<core::Point>& points, std::vector<double>& means,
                         std::vector<double>& stds) const;
    void posterior_batch_serial(const std::vector<core::Point>& points,
                                std::vector<double>& means, std::vector<double>& stds) const;

    const KernelParams& params() const { return params_; }
    double log_marginal_likelihood() const { return lml_; }
    // best training target in original units; 0 for a data-free prior model
    double train_y_max() const {
        return y_std_.size() == 0 ? 0.0 : y_std_.maxCoeff() * y_scale_ + y_mean_;
    }
    bool degenerate() const { return degenerate_; }
    std::size_t training_size() const { return static_cast<std::size_t>(x_norm_.rows()); }
    const core::SearchSpace& space() const { return space_; }

    // log marginal likelihood of standardized targets under given params;
    // exposed for tests and the fit benchmark
    static double lml_for(const core::Dataset& dataset, const KernelParams& params);

private:
    GpModel() = default;
    void condition();
    Eigen::VectorXd normalize(const core::Point& p) const;
    void posterior_normalized(const Eigen::VectorXd& q, double& mean, double& std,
                              Eigen::VectorXd& work) const;

    core::SearchSpace space_;
    Eigen::MatrixXd x_norm_;  // n x d
    Eigen::VectorXd y_std_;   // standardized targets
    KernelParams params_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd x_lo_, x_span_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double lml_ = 0.0;
    bool degenerate_ = false;
};

}  // namespace bora::surrogate
