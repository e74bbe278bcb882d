#include "regmc/core.hpp"

#include <cmath>

namespace regmc {

void SampleBatch::add(std::span<const double> point, double value) {
    if (static_cast<int>(point.size()) != dim_)
        throw Error("DimensionMismatch", "point has dimension " + std::to_string(point.size()) +
                                             ", batch expects " + std::to_string(dim_));
    if (!std::isfinite(value)) throw Error("NonFiniteSample", "integrand value is not finite");
    for (double c : point) {
        if (!(c >= 0.0 && c <= 1.0))
            throw Error("PointOutOfRange", "coordinate " + std::to_string(c) + " outside [0,1]");
    }
    coords_.insert(coords_.end(), point.begin(), point.end());
    values_.push_back(value);
}

SampleBatch SampleBatch::slice(std::size_t begin, std::size_t end) const {
    SampleBatch out(dim_);
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.add(point(i), values_[i]);
    return out;
}

std::string_view solver_name(Solver s) {
    switch (s) {
        case Solver::PlainMc: return "plainmc";
        case Solver::DirectMatrix: return "matrix";
        case Solver::Sgd: return "sgd";
        case Solver::Incremental: return "incremental";
    }
    return "unknown";
}

EstimateReport mc_estimate(const SampleBatch& batch) {
    if (batch.empty()) throw Error("EmptyBatch", "mc_estimate requires at least one sample");
    double sum = 0.0;
    for (double v : batch.values()) sum += v;
    const double mean = sum / static_cast<double>(batch.size());

    double sq = 0.0;
    for (double v : batch.values()) sq += (v - mean) * (v - mean);

    EstimateReport report;
    report.model_integral = 0.0;
    report.difference_mean = mean;
    report.estimate = report.model_integral + report.difference_mean;
    report.n_samples = static_cast<std::int64_t>(batch.size());
    report.residual_estimate = sq / static_cast<double>(batch.size());
    report.solver = Solver::PlainMc;
    return report;
}

double mse(std::span<const double> estimates, double reference) {
    if (estimates.empty()) throw Error("EmptyBatch", "mse requires at least one estimate");
    if (!std::isfinite(reference)) throw Error("NonFiniteSample", "reference is not finite");
    double sum = 0.0;
    for (double e : estimates) sum += (e - reference) * (e - reference);
    return sum / static_cast<double>(estimates.size());
}

double rel_mse(std::span<const double> estimates, double reference) {
    if (estimates.empty()) throw Error("EmptyBatch", "rel_mse requires at least one estimate");
    if (!std::isfinite(reference)) throw Error("NonFiniteSample", "reference is not finite");
    const double denom = reference * reference + 0.01;
    double sum = 0.0;
    for (double e : estimates) sum += (e - reference) * (e - reference) / denom;
    return sum / static_cast<double>(estimates.size());
}

}  // namespace regmc
