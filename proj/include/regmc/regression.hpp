#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>

#include "regmc/basis.hpp"
#include "regmc/core.hpp"

namespace regmc {

// Stochastic gradient descent settings. The rng field seeds the deterministic
// pass shuffles, so identical configs reproduce identical fits.
struct SgdConfig {
    double learning_rate = 0.01;
    int epochs = 4;
    bool shuffle = true;
    RngConfig rng{0x5eed5eed5eed5eedULL, 0};
};

// A fitted model g(u, theta) = sum_q theta_q P_q(u) over a shared BasisSet.
class ModelFunction {
public:
    explicit ModelFunction(std::shared_ptr<const BasisSet> basis);
    ModelFunction(std::shared_ptr<const BasisSet> basis, Eigen::VectorXd theta);

    const BasisSet& basis() const noexcept { return *basis_; }
    const std::shared_ptr<const BasisSet>& basis_ptr() const noexcept { return basis_; }
    const Eigen::VectorXd& theta() const noexcept { return theta_; }

    double evaluate(std::span<const double> u) const;

    // Analytic integral over the unit cube: dot(theta, basis integrals).
    double integral() const { return theta_.dot(basis_->integrals()); }

private:
    std::shared_ptr<const BasisSet> basis_;
    Eigen::VectorXd theta_;
};

// Accumulated least-squares normal equations:
//   A[p][q] = sum_i P_p(u_i) P_q(u_i),   b[q] = sum_i f(u_i) P_q(u_i).
// Only the lower triangle is updated per sample; matrix() mirrors it, so the
// returned A is bit-exactly symmetric. Accumulation is sequential per
// instance; disjoint shards can be accumulated in parallel and merge()d.
class NormalSystem {
public:
    explicit NormalSystem(std::shared_ptr<const BasisSet> basis);

    void accumulate(std::span<const double> u, double f_value);
    void accumulate(const SampleBatch& batch);
    void merge(const NormalSystem& other);

    Eigen::MatrixXd matrix() const;
    const Eigen::VectorXd& rhs() const noexcept { return b_; }
    std::int64_t accumulated() const noexcept { return n_; }
    const std::shared_ptr<const BasisSet>& basis_ptr() const noexcept { return basis_; }

private:
    friend ModelFunction solve_direct(const NormalSystem&);

    std::shared_ptr<const BasisSet> basis_;
    Eigen::MatrixXd a_lower_;
    Eigen::VectorXd b_;
    Eigen::VectorXd p_;  // scratch for the basis evaluation
    std::int64_t n_ = 0;
};

// Diagonal entries of the rank-revealing factorization below this fraction of
// the largest one are treated as zero.
inline constexpr double kRankTolerance = 1e-12;

// Coefficient norm beyond which SGD is considered to have diverged.
inline constexpr double kSgdDivergenceNorm = 1e12;

// Minimum-norm least-squares solution of A theta = b via a rank-revealing
// complete orthogonal decomposition. Succeeds for singular A.
ModelFunction solve_direct(const NormalSystem& system);

// accumulate(batch) followed by solve_direct.
ModelFunction fit_direct(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis);

// Stochastic gradient descent on the mean squared misfit, starting from
// theta = 0. Per sample: theta += 2 lr (f(u_i) - g(u_i, theta)) P(u_i),
// the exact gradient step of (f - g)^2. Runs `epochs` passes over the batch,
// each in a freshly shuffled order when cfg.shuffle is set.
ModelFunction solve_sgd(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                        const SgdConfig& cfg = {});

// Mean squared misfit of the model on the batch: (1/N) sum (f(u_i) - g(u_i))^2.
double residual_estimate(const ModelFunction& model, const SampleBatch& batch);

}  // namespace regmc
