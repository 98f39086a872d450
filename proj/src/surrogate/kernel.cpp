#include "bora/surrogate/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace bora::surrogate {

namespace {
constexpr double kSqrt5 = 2.23606797749978969;

inline double matern52_from_r2(double r2, double signal_variance) {
    const double r = std::sqrt(r2);
    return signal_variance * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * std::exp(-kSqrt5 * r);
}

inline double scaled_sqdist(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j,
                            const Eigen::VectorXd& ls) {
    double r2 = 0.0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double d = (x(i, k) - x(j, k)) / ls(k);
        r2 += d * d;
    }
    return r2;
}
}  // namespace

void KernelParams::validate() const {
    if (lengthscales.size() == 0) throw std::invalid_argument("kernel: lengthscales required");
    for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
        if (!(lengthscales(i) > 0.0))
            throw std::invalid_argument("kernel: lengthscales must be strictly positive");
    if (!(signal_variance > 0.0))
        throw std::invalid_argument("kernel: signal variance must be strictly positive");
    if (noise_variance < kNoiseFloor)
        throw std::invalid_argument("kernel: noise variance below jitter floor");
}

double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& params) {
    double r2 = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double d = (a(k) - b(k)) / params.lengthscales(k);
        r2 += d * d;
    }
    return matern52_from_r2(r2, params.signal_variance);
}

void matern52_vector(const Eigen::MatrixXd& x_train, const Eigen::VectorXd& query,
                     const KernelParams& params, Eigen::VectorXd& out) {
    const Eigen::Index n = x_train.rows();
    out.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double r2 = 0.0;
        for (Eigen::Index k = 0; k < x_train.cols(); ++k) {
            const double d = (x_train(i, k) - query(k)) / params.lengthscales(k);
            r2 += d * d;
        }
        out(i) = matern52_from_r2(r2, params.signal_variance);
    }
}

void matern52_matrix_serial(const Eigen::MatrixXd& x_train, const KernelParams& params,
                            Eigen::MatrixXd& out) {
    const Eigen::Index n = x_train.rows();
    out.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = params.signal_variance;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v =
                matern52_from_r2(scaled_sqdist(x_train, i, j, params.lengthscales),
                                 params.signal_variance);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
}

void matern52_matrix(const Eigen::MatrixXd& x_train, const KernelParams& params,
                     Eigen::MatrixXd& out) {
    const Eigen::Index n = x_train.rows();
    out.resize(n, n);
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = params.signal_variance;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v =
                matern52_from_r2(scaled_sqdist(x_train, i, j, params.lengthscales),
                                 params.signal_variance);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
}

}  // namespace bora::surrogate
