#include "bora/core/stats.hpp"

#include <cmath>

namespace bora::core {

Eigen::MatrixXd correlation_matrix(const Dataset& dataset) {
    const auto& samples = dataset.samples();
    const std::size_t n = samples.size();
    if (n < 2) throw EmptyDataset("correlation_matrix needs at least 2 samples");
    const std::size_t d = dataset.space().dimension();

    Eigen::MatrixXd x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) x(r, c) = samples[r].point[c];

    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::VectorXd var = centered.array().square().colwise().sum() / double(n);

    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            double denom = std::sqrt(var(i) * var(j));
            double value = 0.0;  // zero-variance columns correlate to 0 by convention
            if (denom > 0.0) {
                double cov = centered.col(i).dot(centered.col(j)) / double(n);
                value = std::clamp(cov / denom, -1.0, 1.0);
            }
            corr(i, j) = value;
            corr(j, i) = value;
        }
    }
    return corr;
}

}  // namespace bora::core
