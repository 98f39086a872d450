#include "bora/surrogate/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bora::surrogate {

namespace {

constexpr double kSqrt5 = 2.23606797749978969;
constexpr double kLogLsLo = -6.907755278982137;   // log 1e-3
constexpr double kLogLsHi = 2.302585092994046;    // log 10
constexpr double kLogSvLo = -6.907755278982137;   // log 1e-3
constexpr double kLogSvHi = 6.907755278982137;    // log 1e3
constexpr double kLogNvLo = -23.025850929940457;  // log 1e-10
constexpr double kLogNvHi = 0.0;                  // log 1

struct Bounds {
    Eigen::VectorXd lo, hi;
};

Bounds theta_bounds(Eigen::Index d) {
    Bounds b;
    b.lo.resize(d + 2);
    b.hi.resize(d + 2);
    b.lo.head(d).setConstant(kLogLsLo);
    b.hi.head(d).setConstant(kLogLsHi);
    b.lo(d) = kLogSvLo;
    b.hi(d) = kLogSvHi;
    b.lo(d + 1) = kLogNvLo;
    b.hi(d + 1) = kLogNvHi;
    return b;
}

// Marginal-likelihood objective over theta = [log lengthscales, log signal, log noise].
// Per-dimension squared differences are cached once per fit; every evaluation
// then costs one Cholesky plus O(n^2 d) assembly.
class LmlProblem {
public:
    LmlProblem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) : x_(x), y_(y) {
        const Eigen::Index n = x.rows(), d = x.cols();
        sqdiff_.reserve(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            Eigen::MatrixXd m(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double dd = x(i, k) - x(j, k);
                    m(i, j) = dd * dd;
                }
            sqdiff_.push_back(std::move(m));
        }
    }

    Eigen::Index dim() const { return x_.cols(); }
    Eigen::Index n() const { return x_.rows(); }

    struct Factorization {
        Eigen::MatrixXd k;
        Eigen::LLT<Eigen::MatrixXd> llt;
        bool ok = false;
    };

    double value(const Eigen::VectorXd& theta, Factorization& fact) const {
        fact.ok = factorize(theta, fact.k, fact.llt);
        if (!fact.ok) return -std::numeric_limits<double>::infinity();
        return lml(fact.llt);
    }

    double value(const Eigen::VectorXd& theta) const {
        Factorization fact;
        return value(theta, fact);
    }

    // gradient at a point whose factorization is already in hand
    double grad_at(const Eigen::VectorXd& theta, const Factorization& fact,
                   Eigen::VectorXd& grad) const {
        const Eigen::Index n_ = n(), d = dim();
        if (!fact.ok) {
            grad.setZero(d + 2);
            return -std::numeric_limits<double>::infinity();
        }
        const Eigen::MatrixXd& k_mat = fact.k;
        const Eigen::LLT<Eigen::MatrixXd>& llt = fact.llt;
        const double f = lml(llt);

        Eigen::VectorXd alpha = llt.solve(y_);
        Eigen::MatrixXd kinv = llt.solve(Eigen::MatrixXd::Identity(n_, n_));
        Eigen::MatrixXd a = alpha * alpha.transpose() - kinv;

        const double sv = std::exp(theta(d));
        const double nv = std::exp(theta(d + 1));
        Eigen::ArrayXd ls2(d);
        for (Eigen::Index k = 0; k < d; ++k) ls2(k) = std::exp(2.0 * theta(k));

        // shared factor sv * 5/3 * (1 + sqrt5 u) exp(-sqrt5 u), u from the
        // noise-free part already in k_mat
        Eigen::MatrixXd g_shared(n_, n_);
        for (Eigen::Index i = 0; i < n_; ++i) {
            g_shared(i, i) = sv * (5.0 / 3.0);
            for (Eigen::Index j = i + 1; j < n_; ++j) {
                double r2 = 0.0;
                for (Eigen::Index k = 0; k < d; ++k) r2 += sqdiff_[k](i, j) / ls2(k);
                const double u = std::sqrt(r2);
                const double v = sv * (5.0 / 3.0) * (1.0 + kSqrt5 * u) * std::exp(-kSqrt5 * u);
                g_shared(i, j) = v;
                g_shared(j, i) = v;
            }
        }

        grad.resize(d + 2);
        for (Eigen::Index k = 0; k < d; ++k)
            grad(k) = 0.5 * (a.array() * g_shared.array() * sqdiff_[k].array()).sum() / ls2(k);
        Eigen::MatrixXd k_noisefree = k_mat - nv * Eigen::MatrixXd::Identity(n_, n_);
        grad(d) = 0.5 * (a.array() * k_noisefree.array()).sum();
        grad(d + 1) = 0.5 * a.trace() * nv;
        return f;
    }

private:
    bool factorize(const Eigen::VectorXd& theta, Eigen::MatrixXd& k_mat,
                   Eigen::LLT<Eigen::MatrixXd>& llt) const {
        const Eigen::Index n_ = n(), d = dim();
        const double sv = std::exp(theta(d));
        const double nv = std::exp(theta(d + 1));
        Eigen::ArrayXd ls2(d);
        for (Eigen::Index k = 0; k < d; ++k) ls2(k) = std::exp(2.0 * theta(k));

        k_mat.resize(n_, n_);
        for (Eigen::Index i = 0; i < n_; ++i) {
            k_mat(i, i) = sv + nv;
            for (Eigen::Index j = i + 1; j < n_; ++j) {
                double r2 = 0.0;
                for (Eigen::Index k = 0; k < d; ++k) r2 += sqdiff_[k](i, j) / ls2(k);
                const double u = std::sqrt(r2);
                const double v = sv * (1.0 + kSqrt5 * u + (5.0 / 3.0) * r2) * std::exp(-kSqrt5 * u);
                k_mat(i, j) = v;
                k_mat(j, i) = v;
            }
        }
        llt.compute(k_mat);
        return llt.info() == Eigen::Success;
    }

    double lml(const Eigen::LLT<Eigen::MatrixXd>& llt) const {
        Eigen::VectorXd alpha = llt.solve(y_);
        double logdet = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += std::log(l(i, i));
        return -0.5 * y_.dot(alpha) - logdet -
               0.5 * double(y_.size()) * std::log(2.0 * M_PI);
    }

    const Eigen::MatrixXd& x_;
    const Eigen::VectorXd& y_;
    std::vector<Eigen::MatrixXd> sqdiff_;
};

Eigen::VectorXd clamp_theta(Eigen::VectorXd theta, const Bounds& b) {
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta(i) = std::clamp(theta(i), b.lo(i), b.hi(i));
    return theta;
}

// Projected gradient ascent with a backtracking step; deterministic given
// the start point. Accepted candidates reuse their probe factorization for
// the gradient, so each iteration pays one Cholesky plus one solve.
double ascend(const LmlProblem& problem, const Bounds& bounds, Eigen::VectorXd& theta,
              const FitOptions& options) {
    LmlProblem::Factorization fact;
    double f = problem.value(theta, fact);
    if (!std::isfinite(f)) return f;
    Eigen::VectorXd grad;
    problem.grad_at(theta, fact, grad);
    double step = 0.1;
    for (int iter = 0; iter < options.max_iters; ++iter) {
        double proj_norm = 0.0;
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            double g = grad(i);
            if (theta(i) <= bounds.lo(i) && g < 0.0) g = 0.0;
            if (theta(i) >= bounds.hi(i) && g > 0.0) g = 0.0;
            proj_norm = std::max(proj_norm, std::abs(g));
        }
        if (proj_norm < options.grad_tol) break;

        bool accepted = false;
        for (int back = 0; back < 12; ++back) {
            Eigen::VectorXd cand = clamp_theta(theta + step * grad, bounds);
            LmlProblem::Factorization cand_fact;
            const double f_cand = problem.value(cand, cand_fact);
            if (std::isfinite(f_cand) && f_cand > f) {
                theta = std::move(cand);
                f = f_cand;
                problem.grad_at(theta, cand_fact, grad);
                step = std::min(step * 1.5, 2.0);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || step < 1e-7) break;
    }
    return f;
}

}  // namespace

Eigen::VectorXd GpModel::normalize(const core::Point& p) const {
    const Eigen::Index d = x_lo_.size();
    if (static_cast<Eigen::Index>(p.size()) != d)
        throw std::invalid_argument("posterior: point dimension mismatch");
    Eigen::VectorXd q(d);
    for (Eigen::Index i = 0; i < d; ++i) q(i) = (p[i] - x_lo_(i)) / x_span_(i);
    return q;
}

namespace {

void space_transform(const core::SearchSpace& space, Eigen::VectorXd& lo, Eigen::VectorXd& span) {
    const auto& vars = space.variables();
    lo.resize(vars.size());
    span.resize(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        lo(i) = vars[i].lower;
        span(i) = vars[i].upper - vars[i].lower;
    }
}

}  // namespace

GpModel GpModel::from_params(const core::Dataset& dataset, const KernelParams& params) {
    if (dataset.size() < 1) throw std::invalid_argument("from_params: dataset is empty");
    params.validate();
    const auto& space = dataset.space();
    if (params.lengthscales.size() != static_cast<Eigen::Index>(space.dimension()))
        throw std::invalid_argument("from_params: lengthscale dimension mismatch");

    GpModel model;
    model.space_ = space;
    space_transform(space, model.x_lo_, model.x_span_);

    const auto& samples = dataset.samples();
    const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
    const Eigen::Index d = static_cast<Eigen::Index>(space.dimension());
    model.x_norm_.resize(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d; ++k)
            model.x_norm_(i, k) = (samples[i].point[k] - model.x_lo_(k)) / model.x_span_(k);
        y(i) = samples[i].value;
    }
    model.y_mean_ = y.mean();
    const double var = (y.array() - model.y_mean_).square().mean();
    model.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    model.y_std_ = (y.array() - model.y_mean_) / model.y_scale_;
    model.params_ = params;
    model.condition();
    return model;
}

GpModel GpModel::prior(const core::SearchSpace& space, const KernelParams& params) {
    params.validate();
    GpModel model;
    model.space_ = space;
    space_transform(space, model.x_lo_, model.x_span_);
    model.x_norm_.resize(0, static_cast<Eigen::Index>(space.dimension()));
    model.y_std_.resize(0);
    model.params_ = params;
    return model;
}

GpModel GpModel::fit(const core::Dataset& dataset, const FitOptions& options) {
    if (dataset.size() < 2) throw std::invalid_argument("fit: need at least 2 samples");
    const auto& space = dataset.space();
    const Eigen::Index d = static_cast<Eigen::Index>(space.dimension());

    KernelParams initial;
    initial.lengthscales = Eigen::VectorXd::Constant(d, 0.5);
    initial.signal_variance = 1.0;
    initial.noise_variance = 1e-4;
    GpModel model = from_params(dataset, initial);

    // degenerate dataset: every normalized input identical
    double max_sq = 0.0;
    for (Eigen::Index i = 1; i < model.x_norm_.rows(); ++i)
        max_sq = std::max(max_sq, (model.x_norm_.row(i) - model.x_norm_.row(0)).squaredNorm());
    if (max_sq < 1e-20) {
        model.degenerate_ = true;
        model.params_.lengthscales = Eigen::VectorXd::Ones(d);
        model.params_.signal_variance = 1.0;
        model.params_.noise_variance = std::max(model.params_.noise_variance, 1e-2);
        model.condition();
        model.lml_ = LmlProblem(model.x_norm_, model.y_std_).value(
            [&] {
                Eigen::VectorXd t(d + 2);
                t.head(d).setZero();
                t(d) = 0.0;
                t(d + 1) = std::log(model.params_.noise_variance);
                return t;
            }());
        return model;
    }

    LmlProblem problem(model.x_norm_, model.y_std_);
    const Bounds bounds = theta_bounds(d);

    std::vector<Eigen::VectorXd> starts;
    Eigen::VectorXd theta0(d + 2);
    theta0.head(d).setConstant(std::log(0.5));
    theta0(d) = 0.0;
    theta0(d + 1) = std::log(1e-4);
    starts.push_back(theta0);

    core::Rng rng(core::mix_seed(options.seed, 0x6f17u));
    for (int s = 0; s < options.restarts; ++s) {
        Eigen::VectorXd t(d + 2);
        for (Eigen::Index k = 0; k < d; ++k) t(k) = rng.uniform(std::log(0.05), std::log(2.0));
        t(d) = rng.uniform(std::log(0.1), std::log(10.0));
        t(d + 1) = rng.uniform(std::log(1e-8), std::log(1e-2));
        starts.push_back(std::move(t));
    }

    std::vector<double> scores(starts.size(), -std::numeric_limits<double>::infinity());
    std::vector<Eigen::VectorXd> results(starts.size());

#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (std::size_t s = 0; s < starts.size(); ++s) {
        Eigen::VectorXd theta = clamp_theta(starts[s], bounds);
        scores[s] = ascend(problem, bounds, theta, options);
        results[s] = std::move(theta);
    }

    // ordered argmax keeps the parallel and serial paths identical
    std::size_t best = 0;
    for (std::size_t s = 1; s < starts.size(); ++s)
        if (scores[s] > scores[best]) best = s;

    if (std::isfinite(scores[best])) {
        model.params_.lengthscales.resize(d);
        for (Eigen::Index k = 0; k < d; ++k)
            model.params_.lengthscales(k) = std::exp(results[best](k));
        model.params_.signal_variance = std::exp(results[best](d));
        model.params_.noise_variance = std::max(std::exp(results[best](d + 1)), kNoiseFloor);
        model.lml_ = scores[best];
        model.condition();
    }
    return model;
}

void GpModel::condition() {
    const Eigen::Index n = x_norm_.rows();
    if (n == 0) return;
    Eigen::MatrixXd k_mat;
    matern52_matrix(x_norm_, params_, k_mat);
    double jitter = params_.noise_variance;
    for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::MatrixXd k_noisy = k_mat + jitter * Eigen::MatrixXd::Identity(n, n);
        llt_.compute(k_noisy);
        if (llt_.info() == Eigen::Success) {
            params_.noise_variance = jitter;
            alpha_ = llt_.solve(y_std_);
            // iterative refinement recovers the interpolation property when
            // a tiny noise floor leaves the system ill-conditioned
            for (int refine = 0; refine < 2; ++refine) {
                Eigen::VectorXd residual = y_std_ - k_noisy * alpha_;
                alpha_ += llt_.solve(residual);
            }
            return;
        }
        jitter = std::max(jitter * 10.0, 1e-10);
    }
    throw std::runtime_error("GP conditioning failed: kernel matrix not positive definite");
}

void GpModel::posterior_normalized(const Eigen::VectorXd& q, double& mean, double& std,
                                   Eigen::VectorXd& work) const {
    const Eigen::Index n = x_norm_.rows();
    if (n == 0) {
        mean = y_mean_;
        std = std::sqrt(params_.signal_variance) * y_scale_;
        return;
    }
    matern52_vector(x_norm_, q, params_, work);
    const double mean_std = alpha_.dot(work);
    llt_.matrixL().solveInPlace(work);
    double var = params_.signal_variance - work.squaredNorm();
    var = std::max(var, 0.0);
    mean = mean_std * y_scale_ + y_mean_;
    std = std::sqrt(var) * y_scale_;
}

Posterior GpModel::posterior(const core::Point& p) const {
    Posterior out;
    Eigen::VectorXd work(x_norm_.rows());
    posterior_normalized(normalize(p), out.mean, out.std, work);
    return out;
}

void GpModel::posterior_batch_serial(const std::vector<core::Point>& points,
                                     std::vector<double>& means, std::vector<double>& stds) const {
    means.resize(points.size());
    stds.resize(points.size());
    Eigen::VectorXd work(x_norm_.rows());
    for (std::size_t i = 0; i < points.size(); ++i)
        posterior_normalized(normalize(points[i]), means[i], stds[i], work);
}

void GpModel::posterior_batch(const std::vector<core::Point>& points, std::vector<double>& means,
                              std::vector<double>& stds) const {
    means.resize(points.size());
    stds.resize(points.size());
#pragma omp parallel
    {
        Eigen::VectorXd work(x_norm_.rows());
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < points.size(); ++i)
            posterior_normalized(normalize(points[i]), means[i], stds[i], work);
    }
}

double GpModel::lml_for(const core::Dataset& dataset, const KernelParams& params) {
    GpModel model = from_params(dataset, params);
    LmlProblem problem(model.x_norm_, model.y_std_);
    const Eigen::Index d = params.lengthscales.size();
    Eigen::VectorXd theta(d + 2);
    for (Eigen::Index k = 0; k < d; ++k) theta(k) = std::log(params.lengthscales(k));
    theta(d) = std::log(params.signal_variance);
    theta(d + 1) = std::log(params.noise_variance);
    return problem.value(theta);
}

}  // namespace bora::surrogate
