#include "regmc/estimator.hpp"

#include <cmath>

namespace regmc {

namespace {

ModelFunction fit(const SampleBatch& batch, const std::shared_ptr<const BasisSet>& basis,
                  const SolverSpec& solver) {
    switch (solver.kind) {
        case Solver::DirectMatrix: return fit_direct(batch, basis);
        case Solver::Sgd: return solve_sgd(batch, basis, solver.sgd);
        default:
            throw Error("InvalidConfig", "cv_estimate expects a DirectMatrix or Sgd solver");
    }
}

struct DifferenceStats {
    double mean = 0.0;
    double mean_sq = 0.0;
};

DifferenceStats difference_stats(const ModelFunction& model, const SampleBatch& batch) {
    Eigen::VectorXd p;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        model.basis().evaluate(batch.point(i), p);
        const double d = batch.value(i) - model.theta().dot(p);
        sum += d;
        sum_sq += d * d;
    }
    const double n = static_cast<double>(batch.size());
    return {sum / n, sum_sq / n};
}

}  // namespace

EstimateReport cv_estimate(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                           const SolverSpec& solver, bool cross_fit) {
    if (!basis) throw Error("InvalidConfig", "basis must not be null");
    if (batch.empty()) throw Error("EmptyBatch", "cv_estimate requires at least one sample");

    EstimateReport report;
    report.n_samples = static_cast<std::int64_t>(batch.size());
    report.solver = solver.kind;

    if (!cross_fit) {
        const ModelFunction model = fit(batch, basis, solver);
        const DifferenceStats stats = difference_stats(model, batch);
        report.model_integral = model.integral();
        report.difference_mean = stats.mean;
        report.residual_estimate = stats.mean_sq;
    } else {
        if (batch.size() < 2)
            throw Error("EmptyBatch", "cross-fit needs at least one sample per half");
        const std::size_t half = batch.size() / 2;
        const SampleBatch first = batch.slice(0, half);
        const SampleBatch second = batch.slice(half, batch.size());
        const ModelFunction model_first = fit(first, basis, solver);
        const ModelFunction model_second = fit(second, basis, solver);
        const DifferenceStats on_second = difference_stats(model_first, second);
        const DifferenceStats on_first = difference_stats(model_second, first);
        report.model_integral = 0.5 * (model_first.integral() + model_second.integral());
        report.difference_mean = 0.5 * (on_second.mean + on_first.mean);
        report.residual_estimate = 0.5 * (on_second.mean_sq + on_first.mean_sq);
    }
    report.estimate = report.model_integral + report.difference_mean;
    return report;
}

EstimateReport estimate_with(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                             const SolverSpec& solver, bool cross_fit) {
    switch (solver.kind) {
        case Solver::PlainMc: return mc_estimate(batch);
        case Solver::Incremental: {
            if (batch.empty())
                throw Error("EmptyBatch", "incremental estimate requires at least one sample");
            SgdConfig cfg;
            cfg.learning_rate = solver.incremental_rate;
            IncrementalEstimator inc(std::move(basis), cfg);
            for (std::size_t i = 0; i < batch.size(); ++i)
                inc.add_sample(batch.point(i), batch.value(i));
            return inc.report();
        }
        default: return cv_estimate(batch, std::move(basis), solver, cross_fit);
    }
}

IncrementalEstimator::IncrementalEstimator(std::shared_ptr<const BasisSet> basis, SgdConfig cfg,
                                           Rate rate)
    : basis_(std::move(basis)), cfg_(cfg), rate_(rate) {
    if (!basis_) throw Error("InvalidConfig", "basis must not be null");
    if (!(cfg_.learning_rate > 0.0)) throw Error("InvalidConfig", "learning_rate must be > 0");
    theta_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->count()));
    p_.resize(theta_.size());
}

void IncrementalEstimator::add_sample(std::span<const double> u, double f_value) {
    if (!std::isfinite(f_value)) throw Error("NonFiniteSample", "integrand value is not finite");
    basis_->evaluate(u, p_);

    // Estimate first, with the pre-update model.
    const double g = theta_.dot(p_);
    const double integral = theta_.dot(basis_->integrals());
    const double d = integral + f_value - g;
    estimate_ = (static_cast<double>(n_) * estimate_ + d) / static_cast<double>(n_ + 1);
    residual_sum_ += (f_value - g) * (f_value - g);

    double rate = cfg_.learning_rate;
    if (rate_ == Rate::Harmonic) rate /= static_cast<double>(n_ + 1);
    theta_.noalias() += (2.0 * rate * (f_value - g)) * p_;
    constexpr double kLimitSq = kSgdDivergenceNorm * kSgdDivergenceNorm;
    if (!(theta_.squaredNorm() <= kLimitSq))
        throw Error("SgdDiverged",
                    "coefficient norm exceeded " + std::to_string(kSgdDivergenceNorm));
    ++n_;
}

double IncrementalEstimator::estimate() const {
    if (n_ < 1) throw Error("EmptyBatch", "no samples consumed yet");
    return estimate_;
}

EstimateReport IncrementalEstimator::report() const {
    EstimateReport report;
    report.solver = Solver::Incremental;
    report.n_samples = n_;
    report.model_integral = model_integral();
    report.difference_mean = estimate() - report.model_integral;
    report.estimate = report.model_integral + report.difference_mean;
    report.residual_estimate = residual_sum_ / static_cast<double>(n_);
    return report;
}

EstimateReport mis_cv_estimate(std::span<const MisSample> samples,
                               std::shared_ptr<const BasisSet> basis, const SolverSpec& solver) {
    if (!basis) throw Error("InvalidConfig", "basis must not be null");
    if (samples.empty()) throw Error("EmptyBatch", "mis_cv_estimate requires at least one sample");

    int technique_count = 0;
    for (const MisSample& s : samples) {
        if (s.technique < 0) throw Error("InvalidConfig", "technique index must be >= 0");
        technique_count = std::max(technique_count, s.technique + 1);
    }

    std::vector<SampleBatch> batches;
    batches.reserve(static_cast<std::size_t>(technique_count));
    for (int t = 0; t < technique_count; ++t) batches.emplace_back(basis->dim());
    for (const MisSample& s : samples)
        batches[static_cast<std::size_t>(s.technique)].add(s.point, s.weighted_value);

    EstimateReport report;
    report.solver = solver.kind;
    report.n_samples = static_cast<std::int64_t>(samples.size());
    for (const SampleBatch& batch : batches) {
        if (batch.empty()) continue;
        const EstimateReport part = cv_estimate(batch, basis, solver);
        report.model_integral += part.model_integral;
        report.difference_mean += part.difference_mean;
        report.residual_estimate += part.residual_estimate;
    }
    report.estimate = report.model_integral + report.difference_mean;
    return report;
}

}  // namespace regmc
