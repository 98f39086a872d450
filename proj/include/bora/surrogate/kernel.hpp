#pragma once

#include <Eigen/Dense>

namespace bora::surrogate {

// Matern 5/2 with ARD lengthscales, evaluated on normalized inputs.
struct KernelParams {
    Eigen::VectorXd lengthscales;   // one per dimension, > 0
    double signal_variance = 1.0;   // > 0
    double noise_variance = 1e-6;   // >= kNoiseFloor

    void validate() const;
};

constexpr double kNoiseFloor = 1e-10;

// k(a, b) for a single pair.
double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& params);

// Cross-covariance between one query row and every training row.
void matern52_vector(const Eigen::MatrixXd& x_train, const Eigen::VectorXd& query,
                     const KernelParams& params, Eigen::VectorXd& out);

// Full noise-free training covariance. The parallel flavour splits rows
// across OpenMP threads; the serial flavour is the reference used by the
// equivalence tests and the benchmark.
void matern52_matrix_serial(const Eigen::MatrixXd& x_train, const KernelParams& params,
                            Eigen::MatrixXd& out);
void matern52_matrix(const Eigen::MatrixXd& x_train, const KernelParams& params,
                     Eigen::MatrixXd& out);

}  // namespace bora::surrogate
