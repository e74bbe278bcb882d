#include "regmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace regmc {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t stream_for(int n, std::size_t replication) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(replication));
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.budgets.empty()) throw Error("InvalidConfig", "at least one sample budget required");
    int prev = 0;
    for (int n : cfg.budgets) {
        if (n <= prev) throw Error("InvalidConfig", "budgets must be positive and ascending");
        prev = n;
    }
    if (cfg.replications < 1) throw Error("InvalidConfig", "replications must be >= 1");
    if (cfg.orders.empty()) throw Error("InvalidConfig", "at least one basis order required");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Per-(budget, order) estimates for one solver plus the paired plain MC
// estimates over the same batches.
struct SweepResult {
    // estimates[order_index][replication]
    std::vector<std::vector<double>> estimates;
    std::vector<double> mc_estimates;
    std::vector<double> fit_seconds;  // per order, summed over replications
};

SweepResult run_budget(const ExperimentConfig& cfg, const IntegrandSpec& integrand,
                       const std::vector<std::shared_ptr<const BasisSet>>& bases, int n) {
    const auto reps = static_cast<std::size_t>(cfg.replications);
    SweepResult result;
    result.estimates.assign(bases.size(), std::vector<double>(reps, 0.0));
    result.mc_estimates.assign(reps, 0.0);
    std::vector<std::vector<double>> seconds(bases.size(), std::vector<double>(reps, 0.0));

    parallel_for(reps, cfg.threads, [&](std::size_t r) {
        const SampleBatch batch =
            draw_batch(integrand, static_cast<std::size_t>(n), {cfg.seed, stream_for(n, r)});
        result.mc_estimates[r] = mc_estimate(batch).estimate;
        if (cfg.solver.kind == Solver::PlainMc) return;
        for (std::size_t o = 0; o < bases.size(); ++o) {
            const auto t0 = Clock::now();
            const EstimateReport report = estimate_with(batch, bases[o], cfg.solver, cfg.cross_fit);
            seconds[o][r] = std::chrono::duration<double>(Clock::now() - t0).count();
            result.estimates[o][r] = report.estimate;
        }
    });

    if (cfg.solver.kind == Solver::PlainMc)
        for (auto& per_order : result.estimates) per_order = result.mc_estimates;
    result.fit_seconds.resize(bases.size());
    for (std::size_t o = 0; o < bases.size(); ++o) result.fit_seconds[o] = 0.0;
    for (std::size_t o = 0; o < bases.size(); ++o)
        for (double s : seconds[o]) result.fit_seconds[o] += s;
    return result;
}

ConvergenceRow make_row(const ExperimentConfig& cfg, const IntegrandSpec& integrand,
                        const BasisSet* basis, Solver solver, int n,
                        std::span<const double> estimates, std::span<const double> mc_estimates) {
    const Reference ref = integrand.reference();
    ConvergenceRow row;
    row.integrand = integrand.name();
    row.dim = integrand.dim;
    row.basis = basis ? std::string(basis_kind_name(basis->kind())) : "none";
    row.order = basis ? basis->parameter() : 0;
    row.solver = std::string(solver_name(solver));
    row.n = n;
    row.replications = cfg.replications;
    row.mean_estimate = mean_of(estimates);
    row.reference = ref.value;
    row.mse = mse(estimates, ref.value);
    row.rel_mse = rel_mse(estimates, ref.value);
    const double mc = mse(mc_estimates, ref.value);
    row.mse_ratio_vs_mc = mc > 0.0 ? row.mse / mc : 1.0;
    return row;
}

std::vector<std::shared_ptr<const BasisSet>> make_bases(const ExperimentConfig& cfg, int dim) {
    std::vector<std::shared_ptr<const BasisSet>> bases;
    bases.reserve(cfg.orders.size());
    for (int order : cfg.orders)
        bases.push_back(make_basis(cfg.basis_kind, dim, order, cfg.gaussian_width));
    return bases;
}

}  // namespace

std::shared_ptr<const BasisSet> make_basis(BasisKind kind, int dim, int parameter,
                                           double gaussian_width) {
    switch (kind) {
        case BasisKind::Polynomial: return BasisSet::polynomial(dim, parameter);
        case BasisKind::Step: return BasisSet::step(dim, parameter);
        case BasisKind::GaussianMixture: return BasisSet::gaussian(dim, parameter, gaussian_width);
        case BasisKind::Sine: return BasisSet::sine(dim, parameter);
    }
    throw Error("InvalidConfig", "unknown basis kind");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const bool plain = cfg.solver.kind == Solver::PlainMc;
    const auto bases = plain ? std::vector<std::shared_ptr<const BasisSet>>{}
                             : make_bases(cfg, cfg.integrand.dim);

    std::vector<ConvergenceRow> rows;
    for (int n : cfg.budgets) {
        const SweepResult result = run_budget(cfg, cfg.integrand, bases, n);
        if (plain) {
            rows.push_back(make_row(cfg, cfg.integrand, nullptr, Solver::PlainMc, n,
                                    result.mc_estimates, result.mc_estimates));
        } else {
            for (std::size_t o = 0; o < bases.size(); ++o)
                rows.push_back(make_row(cfg, cfg.integrand, bases[o].get(), cfg.solver.kind, n,
                                        result.estimates[o], result.mc_estimates));
        }
    }
    return rows;
}

std::vector<ConvergenceRow> run_light_sweep(std::span<const int> light_counts,
                                            const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.integrand.id != IntegrandId::MultiLight)
        throw Error("InvalidConfig", "light sweep requires the multilight integrand");
    if (light_counts.empty()) throw Error("InvalidConfig", "at least one light count required");
    if (cfg.solver.kind == Solver::PlainMc)
        throw Error("InvalidConfig", "light sweep compares a fitted solver against plain MC");

    std::vector<ConvergenceRow> rows;
    for (int lights : light_counts) {
        const IntegrandSpec integrand = IntegrandSpec::multi_light(lights);
        const auto bases = make_bases(cfg, integrand.dim);
        for (int n : cfg.budgets) {
            const SweepResult result = run_budget(cfg, integrand, bases, n);
            for (std::size_t o = 0; o < bases.size(); ++o)
                rows.push_back(make_row(cfg, integrand, bases[o].get(), cfg.solver.kind, n,
                                        result.estimates[o], result.mc_estimates));
        }
    }
    return rows;
}

std::vector<ConvergenceRow> run_solver_compare(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto bases = make_bases(cfg, cfg.integrand.dim);

    std::vector<ConvergenceRow> rows;
    for (int n : cfg.budgets) {
        for (const SolverSpec& solver :
             {SolverSpec::direct(), SolverSpec::sgd_solver(cfg.solver.sgd)}) {
            ExperimentConfig run = cfg;
            run.solver = solver;
            const SweepResult result = run_budget(run, cfg.integrand, bases, n);
            for (std::size_t o = 0; o < bases.size(); ++o) {
                ConvergenceRow row = make_row(run, cfg.integrand, bases[o].get(), solver.kind, n,
                                              result.estimates[o], result.mc_estimates);
                row.wall_time_seconds = result.fit_seconds[o];
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
    out << "integrand,dim,basis,order,solver,n,replications,mean_estimate,reference,"
           "mse,rel_mse,mse_ratio_vs_mc,wall_time_seconds\r\n";
    for (const ConvergenceRow& row : rows) {
        out << row.integrand << ',' << row.dim << ',' << row.basis << ',' << row.order << ','
            << row.solver << ',' << row.n << ',' << row.replications << ','
            << format_double(row.mean_estimate) << ',' << format_double(row.reference) << ','
            << format_double(row.mse) << ',' << format_double(row.rel_mse) << ','
            << format_double(row.mse_ratio_vs_mc) << ',' << format_double(row.wall_time_seconds)
            << "\r\n";
    }
}

}  // namespace regmc
