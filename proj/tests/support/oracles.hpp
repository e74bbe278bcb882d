// Test-only oracles, kept independent of the code paths they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "regmc/core.hpp"
#include "regmc/regression.hpp"

namespace regmc::testing {

// Least squares straight from the N x (M+1) design matrix via SVD. This is an
// independent route to the minimum-norm solution: it never forms the normal
// equations the production solver uses.
inline Eigen::VectorXd design_matrix_least_squares(const SampleBatch& batch,
                                                   const BasisSet& basis) {
    const auto n = static_cast<Eigen::Index>(batch.size());
    const auto m = static_cast<Eigen::Index>(basis.count());
    Eigen::MatrixXd design(n, m);
    Eigen::VectorXd values(n);
    Eigen::VectorXd row;
    for (Eigen::Index i = 0; i < n; ++i) {
        basis.evaluate(batch.point(static_cast<std::size_t>(i)), row);
        design.row(i) = row;
        values[i] = batch.value(static_cast<std::size_t>(i));
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    return svd.solve(values);
}

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_error = 0.0;
    double fourth_central = 0.0;
};

inline MomentSummary summarize(std::span<const double> values) {
    MomentSummary s;
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    for (double v : values) {
        const double d = v - s.mean;
        s.variance += d * d;
        s.fourth_central += d * d * d * d;
    }
    s.variance /= (n - 1.0);
    s.fourth_central /= n;
    s.std_error = std::sqrt(s.variance / n);
    return s;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace regmc::testing
