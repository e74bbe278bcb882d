#pragma once

#include <memory>
#include <span>
#include <vector>

#include "regmc/core.hpp"
#include "regmc/regression.hpp"

namespace regmc {

// Which fit backs the control-variate estimate.
struct SolverSpec {
    Solver kind = Solver::DirectMatrix;
    SgdConfig sgd{};
    double incremental_rate = 0.01;

    static SolverSpec plain_mc() { return {Solver::PlainMc, {}, 0.01}; }
    static SolverSpec direct() { return {Solver::DirectMatrix, {}, 0.01}; }
    static SolverSpec sgd_solver(SgdConfig cfg = {}) { return {Solver::Sgd, cfg, 0.01}; }
    static SolverSpec incremental(double rate = 0.01) { return {Solver::Incremental, {}, rate}; }
};

// Control-variate estimate: fit g to the batch, integrate it analytically,
// and add the sample mean of f - g. With cross_fit the batch is split in
// halves, each half is fitted separately, the difference term is evaluated on
// the opposite half, and the two estimates are averaged; that removes the
// small same-sample fitting bias at the cost of fitting on half the data.
// Accepts DirectMatrix and Sgd solvers.
EstimateReport cv_estimate(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                           const SolverSpec& solver, bool cross_fit = false);

// Uniform dispatch over all four solver kinds (PlainMc ignores the basis,
// Incremental consumes the batch in order).
EstimateReport estimate_with(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                             const SolverSpec& solver, bool cross_fit = false);

// Progressive estimator: each new sample first contributes
//   d = G_n + f(u) - g_n(u)
// evaluated with the current model, the running estimate is updated to
// (n * estimate + d) / (n + 1), and only then is the model moved by one
// single-sample gradient step. Using the pre-update model keeps every
// contribution independent of its own sample, so the running estimate stays
// unbiased. Strictly sequential; not shareable across threads.
class IncrementalEstimator {
public:
    // Harmonic divides the learning rate by the step index, which makes a
    // constant-only model track the running sample mean exactly.
    enum class Rate { Constant, Harmonic };

    explicit IncrementalEstimator(std::shared_ptr<const BasisSet> basis, SgdConfig cfg = {},
                                  Rate rate = Rate::Constant);

    void add_sample(std::span<const double> u, double f_value);

    std::int64_t count() const noexcept { return n_; }
    double estimate() const;  // requires at least one sample
    ModelFunction model() const { return {basis_, theta_}; }
    double model_integral() const { return theta_.dot(basis_->integrals()); }
    EstimateReport report() const;

private:
    std::shared_ptr<const BasisSet> basis_;
    SgdConfig cfg_;
    Rate rate_;
    Eigen::VectorXd theta_;
    Eigen::VectorXd p_;
    std::int64_t n_ = 0;
    double estimate_ = 0.0;
    double residual_sum_ = 0.0;
};

// One importance-sampled contribution, already weighted: the stored value is
// w_t(x) f(x) / p_t(x) and the point is the sample's unit-cube coordinate
// under its own technique's parameterization.
struct MisSample {
    std::vector<double> point;
    double weighted_value = 0.0;
    int technique = 0;
};

// Runs the control-variate estimator per technique on the weighted values and
// sums the per-technique estimates. With a constant-only basis this is the
// plain multi-sample combination of the input weights.
EstimateReport mis_cv_estimate(std::span<const MisSample> samples,
                               std::shared_ptr<const BasisSet> basis, const SolverSpec& solver);

}  // namespace regmc
