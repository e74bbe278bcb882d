#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "regmc/basis.hpp"
#include "regmc/estimator.hpp"
#include "regmc/integrands.hpp"

namespace regmc {

// One benchmark configuration: a single integrand, one basis family at one or
// more parameter values, one solver, and a list of sample budgets replicated
// R times each. Replication r at budget N always consumes the stream
// (seed, N << 32 | r), so runs that differ only in solver or basis see
// identical samples.
struct ExperimentConfig {
    IntegrandSpec integrand = IntegrandSpec::sum_sin(1);
    BasisKind basis_kind = BasisKind::Polynomial;
    std::vector<int> orders = {1, 2};  // polynomial order, or per-axis parameter
    double gaussian_width = 0.2;       // used when basis_kind == GaussianMixture
    SolverSpec solver = SolverSpec::direct();
    std::vector<int> budgets = {16, 64, 256, 1024};
    int replications = 100;
    std::uint64_t seed = 0;
    bool cross_fit = false;
    int threads = 0;  // 0 = hardware concurrency
};

struct ConvergenceRow {
    std::string integrand;
    int dim = 1;
    std::string basis;
    int order = 0;
    std::string solver;
    int n = 0;
    int replications = 0;
    double mean_estimate = 0.0;
    double reference = 0.0;
    double mse = 0.0;
    double rel_mse = 0.0;
    double mse_ratio_vs_mc = 1.0;
    double wall_time_seconds = 0.0;
};

// One row per (budget, order) for the configured solver, with the MSE ratio
// taken against a plain Monte Carlo run over the identical sample streams.
// wall_time_seconds is left at zero so reruns are byte-identical.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg);

// MultiLight sweep: one row per (light count, order), cfg.integrand ignored
// except that it must be a MultiLight spec.
std::vector<ConvergenceRow> run_light_sweep(std::span<const int> light_counts,
                                            const ExperimentConfig& cfg);

// DirectMatrix vs Sgd over identical streams; wall_time_seconds reports the
// accumulated fit+estimate time (sampling excluded).
std::vector<ConvergenceRow> run_solver_compare(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

// Runs the library's invariant checks, printing one line per check.
// Returns true when all pass.
bool run_validation(std::ostream& out);

// Runs body(0..count-1) on a small worker pool; any exception is rethrown on
// the caller's thread after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

std::shared_ptr<const BasisSet> make_basis(BasisKind kind, int dim, int parameter,
                                           double gaussian_width);

}  // namespace regmc
