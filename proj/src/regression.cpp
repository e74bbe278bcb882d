#include "regmc/regression.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numeric>

namespace regmc {

namespace {

std::shared_ptr<const BasisSet> require_basis(std::shared_ptr<const BasisSet> basis) {
    if (!basis) throw Error("InvalidConfig", "basis must not be null");
    return basis;
}

void check_batch_dim(const SampleBatch& batch, const BasisSet& basis) {
    if (batch.dim() != basis.dim())
        throw Error("DimensionMismatch", "batch dimension " + std::to_string(batch.dim()) +
                                             " does not match basis dimension " +
                                             std::to_string(basis.dim()));
}

}  // namespace

ModelFunction::ModelFunction(std::shared_ptr<const BasisSet> basis)
    : basis_(require_basis(std::move(basis))),
      theta_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->count()))) {}

ModelFunction::ModelFunction(std::shared_ptr<const BasisSet> basis, Eigen::VectorXd theta)
    : basis_(require_basis(std::move(basis))), theta_(std::move(theta)) {
    if (theta_.size() != static_cast<Eigen::Index>(basis_->count()))
        throw Error("DimensionMismatch", "coefficient count does not match basis count");
    if (!theta_.allFinite()) throw Error("NonFiniteSample", "coefficients must be finite");
}

double ModelFunction::evaluate(std::span<const double> u) const {
    thread_local Eigen::VectorXd p;
    basis_->evaluate(u, p);
    return theta_.dot(p);
}

NormalSystem::NormalSystem(std::shared_ptr<const BasisSet> basis)
    : basis_(require_basis(std::move(basis))) {
    const auto m = static_cast<Eigen::Index>(basis_->count());
    a_lower_ = Eigen::MatrixXd::Zero(m, m);
    b_ = Eigen::VectorXd::Zero(m);
    p_.resize(m);
}

void NormalSystem::accumulate(std::span<const double> u, double f_value) {
    if (!std::isfinite(f_value)) throw Error("NonFiniteSample", "integrand value is not finite");
    basis_->evaluate(u, p_);
    a_lower_.selfadjointView<Eigen::Lower>().rankUpdate(p_, 1.0);
    b_.noalias() += f_value * p_;
    ++n_;
}

void NormalSystem::accumulate(const SampleBatch& batch) {
    check_batch_dim(batch, *basis_);
    for (std::size_t i = 0; i < batch.size(); ++i) accumulate(batch.point(i), batch.value(i));
}

void NormalSystem::merge(const NormalSystem& other) {
    if (basis_.get() != other.basis_.get())
        throw Error("InvalidConfig", "cannot merge systems over different bases");
    a_lower_ += other.a_lower_;
    b_ += other.b_;
    n_ += other.n_;
}

Eigen::MatrixXd NormalSystem::matrix() const {
    return a_lower_.selfadjointView<Eigen::Lower>();
}

ModelFunction solve_direct(const NormalSystem& system) {
    if (system.accumulated() < 1)
        throw Error("EmptyBatch", "solve_direct requires at least one accumulated sample");
    const Eigen::MatrixXd a = system.a_lower_.selfadjointView<Eigen::Lower>();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(kRankTolerance);
    cod.compute(a);
    return {system.basis_ptr(), cod.solve(system.rhs())};
}

ModelFunction fit_direct(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis) {
    NormalSystem system(std::move(basis));
    system.accumulate(batch);
    return solve_direct(system);
}

ModelFunction solve_sgd(const SampleBatch& batch, std::shared_ptr<const BasisSet> basis,
                        const SgdConfig& cfg) {
    basis = require_basis(std::move(basis));
    if (batch.empty()) throw Error("EmptyBatch", "solve_sgd requires a nonempty batch");
    check_batch_dim(batch, *basis);
    if (!(cfg.learning_rate > 0.0)) throw Error("InvalidConfig", "learning_rate must be > 0");
    if (cfg.epochs < 1) throw Error("InvalidConfig", "epochs must be >= 1");

    const auto m = static_cast<Eigen::Index>(basis->count());
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd p(m);

    const std::size_t n = batch.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Pcg32 rng(cfg.rng);

    constexpr double kLimitSq = kSgdDivergenceNorm * kSgdDivergenceNorm;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            for (std::size_t i = n - 1; i > 0; --i)
                std::swap(order[i], order[rng.next_below(static_cast<std::uint32_t>(i + 1))]);
        }
        for (std::uint32_t i : order) {
            basis->evaluate(batch.point(i), p);
            const double g = theta.dot(p);
            theta.noalias() += (2.0 * cfg.learning_rate * (batch.value(i) - g)) * p;
            if (!(theta.squaredNorm() <= kLimitSq))
                throw Error("SgdDiverged", "coefficient norm exceeded " +
                                               std::to_string(kSgdDivergenceNorm));
        }
    }
    return {std::move(basis), std::move(theta)};
}

double residual_estimate(const ModelFunction& model, const SampleBatch& batch) {
    if (batch.empty()) throw Error("EmptyBatch", "residual_estimate requires a nonempty batch");
    check_batch_dim(batch, model.basis());
    thread_local Eigen::VectorXd p;
    double sum = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        model.basis().evaluate(batch.point(i), p);
        const double d = batch.value(i) - model.theta().dot(p);
        sum += d * d;
    }
    return sum / static_cast<double>(batch.size());
}

}  // namespace regmc
