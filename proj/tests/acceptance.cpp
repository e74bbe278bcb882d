// Acceptance suite: one test case and one printed pass/fail line per
// criterion, each with its runtime budget enforced.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "regmc/experiment.hpp"
#include "regmc/quadrature.hpp"
#include "support/oracles.hpp"

using namespace regmc;

namespace {

class Criterion {
public:
    Criterion(int index, std::string label, double budget_seconds)
        : index_(index), label_(std::move(label)), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void finish(bool pass, const std::string& detail) {
        const double seconds = elapsed();
        std::printf("criterion %2d  %-34s %s  (%s; %.2f s, budget %.0f s)\n", index_,
                    label_.c_str(), pass ? "PASS" : "FAIL", detail.c_str(), seconds, budget_);
        std::fflush(stdout);
        CHECK_MESSAGE(pass, label_, ": ", detail);
        CHECK_MESSAGE(seconds < budget_, label_, " exceeded its runtime budget");
    }

private:
    int index_;
    std::string label_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

int run_cli(const std::string& args) {
    const std::string command = std::string(REGMC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("1: constant-basis estimates reduce to plain MC") {
    Criterion criterion(1, "reduction to plain MC", 5.0);
    const auto integrands = builtin_integrands();
    Pcg32 rng(2024, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const IntegrandSpec& spec = integrands[static_cast<std::size_t>(trial) % integrands.size()];
        const std::size_t n = 4 + rng.next_below(1021);
        const SampleBatch batch =
            draw_batch(spec, n, {1000 + static_cast<std::uint64_t>(trial), 0});
        const auto basis = BasisSet::polynomial(spec.dim, 0);
        const SolverSpec solver = trial % 2 == 0 ? SolverSpec::direct() : SolverSpec::sgd_solver();
        const double cv = cv_estimate(batch, basis, solver).estimate;
        const double mc = mc_estimate(batch).estimate;
        double scale = std::abs(mc);
        for (double v : batch.values()) scale = std::max(scale, std::abs(v));
        worst = std::max(worst, std::abs(cv - mc) / std::max(scale, 1e-300));
    }
    criterion.finish(worst <= 1e-13, "worst relative deviation " + fmt(worst));
}

TEST_CASE("2: order-1/2 fits never lose to plain MC") {
    Criterion criterion(2, "MSE dominance at N=1024", 60.0);
    double worst_ratio = 0.0;
    std::string worst_case = "-";
    for (const IntegrandSpec& spec : builtin_integrands()) {
        ExperimentConfig cfg;
        cfg.integrand = spec;
        cfg.orders = {1, 2};
        cfg.budgets = {1024};
        cfg.replications = 1000;
        cfg.seed = 11;
        for (const ConvergenceRow& row : run_convergence(cfg)) {
            if (row.mse_ratio_vs_mc > worst_ratio) {
                worst_ratio = row.mse_ratio_vs_mc;
                worst_case = row.integrand + "/O" + std::to_string(row.order);
            }
        }
    }
    criterion.finish(worst_ratio <= 1.05,
                     "worst MSE ratio " + fmt(worst_ratio) + " at " + worst_case);
}

TEST_CASE("3: exact-span error collapse") {
    Criterion criterion(3, "order-5 fit of a degree-5 integrand", 1.0);
    const IntegrandSpec spec = IntegrandSpec::poly1d();
    const double reference = spec.reference().value;
    const auto basis = BasisSet::polynomial(1, 5);
    double worst = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const SampleBatch batch = draw_batch(spec, 64, {12, r});
        const double estimate = cv_estimate(batch, basis, SolverSpec::direct()).estimate;
        worst = std::max(worst, std::abs(estimate - reference));
    }
    criterion.finish(worst <= 1e-8, "worst absolute error " + fmt(worst));
}

TEST_CASE("4: cross-fit estimates are unbiased") {
    Criterion criterion(4, "cross-fit unbiasedness", 30.0);
    bool pass = true;
    std::string detail;
    for (const IntegrandSpec& spec : {IntegrandSpec::exp_sum(1), IntegrandSpec::sum_sin(5)}) {
        const auto basis = BasisSet::polynomial(spec.dim, 2);
        const int reps = 10000;
        std::vector<double> estimates(reps);
        parallel_for(static_cast<std::size_t>(reps), 0, [&](std::size_t r) {
            const SampleBatch batch = draw_batch(spec, 64, {13, r});
            estimates[r] = cv_estimate(batch, basis, SolverSpec::direct(), true).estimate;
        });
        const auto s = testing::summarize(estimates);
        const double dev = std::abs(s.mean - spec.reference().value);
        pass = pass && dev <= 3.0 * s.std_error;
        if (!detail.empty()) detail += ", ";
        detail += spec.name() + " |dev|/se=" + fmt(dev / s.std_error);
    }
    criterion.finish(pass, detail);
}

TEST_CASE("5: frozen-model variance identity") {
    Criterion criterion(5, "N*Var vs quadrature prediction", 30.0);
    const IntegrandSpec spec = IntegrandSpec::shifted_gaussian1d();
    const auto basis = BasisSet::polynomial(1, 2);
    const ModelFunction model = fit_direct(draw_batch(spec, 4096, {14, 999}), basis);

    const int n = 256;
    const int reps = 10000;
    std::vector<double> estimates(reps);
    parallel_for(static_cast<std::size_t>(reps), 0, [&](std::size_t r) {
        const SampleBatch batch = draw_batch(spec, static_cast<std::size_t>(n), {15, r});
        double diff = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i)
            diff += batch.value(i) - model.evaluate(batch.point(i));
        estimates[r] = model.integral() + diff / static_cast<double>(n);
    });
    const auto s = testing::summarize(estimates);
    const double lhs = n * s.variance;
    const double se = n * std::sqrt(std::max(0.0, s.fourth_central - s.variance * s.variance) /
                                    static_cast<double>(reps));

    const double residual = quadrature::simpson(
        [&](double x) {
            const double u[1] = {x};
            const double d = spec.evaluate(u) - model.evaluate(u);
            return d * d;
        },
        1000000);
    const double f_integral = quadrature::simpson(
        [&](double x) {
            const double u[1] = {x};
            return spec.evaluate(u);
        },
        1000000);
    const double gap = f_integral - model.integral();
    const double rhs = residual - gap * gap;
    criterion.finish(std::abs(lhs - rhs) <= 3.0 * se,
                     "N*Var=" + fmt(lhs) + " prediction=" + fmt(rhs) + " 3se=" + fmt(3.0 * se));
}

TEST_CASE("6: fitted residual never exceeds the constant fit") {
    Criterion criterion(6, "residual optimality, 500 batches", 30.0);
    const auto integrands = builtin_integrands();
    Pcg32 rng(2025, 0);
    bool pass = true;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 500 && pass; ++trial) {
        const IntegrandSpec& spec = integrands[static_cast<std::size_t>(trial) % integrands.size()];
        const std::size_t n = 4 + rng.next_below(124);
        const SampleBatch batch = draw_batch(spec, n, {16, static_cast<std::uint64_t>(trial)});
        std::shared_ptr<const BasisSet> basis;
        switch (trial % 4) {
            case 0: basis = BasisSet::polynomial(spec.dim, 1 + trial % 3); break;
            case 1: basis = BasisSet::step(spec.dim, 2); break;
            case 2: basis = BasisSet::gaussian(spec.dim, 2, 0.2 + 0.2 * rng.next_double()); break;
            default: basis = BasisSet::sine(spec.dim, 1 + trial % 2); break;
        }
        const double fitted = residual_estimate(fit_direct(batch, basis), batch);
        const double constant =
            residual_estimate(fit_direct(batch, BasisSet::polynomial(spec.dim, 0)), batch);
        worst_gap = std::max(worst_gap, fitted - constant);
        pass = fitted <= constant + 1e-12;
    }
    criterion.finish(pass, "worst residual excess " + fmt(worst_gap));
}

TEST_CASE("7: SGD gradient and convergence") {
    Criterion criterion(7, "SGD correctness", 30.0);
    Pcg32 rng(2026, 0);
    bool gradient_ok = true;
    for (int trial = 0; trial < 100 && gradient_ok; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next_below(3));
        const int order = 1 + static_cast<int>(rng.next_below(3));
        const auto basis = BasisSet::polynomial(dim, order);
        const auto m = static_cast<Eigen::Index>(basis->count());
        std::vector<double> u(static_cast<std::size_t>(dim));
        rng.fill(u);
        Eigen::VectorXd theta(m);
        for (Eigen::Index q = 0; q < m; ++q) theta[q] = 2.0 * rng.next_double() - 1.0;
        const double f = 2.0 * rng.next_double() - 1.0;
        const Eigen::VectorXd p = basis->evaluate(u);
        const Eigen::VectorXd analytic = -2.0 * (f - theta.dot(p)) * p;
        const double h = 0.5;  // the loss is quadratic in theta, so any step is exact
        for (Eigen::Index q = 0; q < m && gradient_ok; ++q) {
            Eigen::VectorXd tp = theta;
            Eigen::VectorXd tm = theta;
            tp[q] += h;
            tm[q] -= h;
            const double rp = (f - tp.dot(p)) * (f - tp.dot(p));
            const double rm = (f - tm.dot(p)) * (f - tm.dot(p));
            const double fd = (rp - rm) / (2.0 * h);
            const double denom = std::max({std::abs(analytic[q]), std::abs(fd), 1e-8});
            gradient_ok = std::abs(analytic[q] - fd) / denom < 1e-6;
        }
    }

    SampleBatch batch(1);
    Pcg32 sampler(2027, 0);
    for (int i = 0; i < 4096; ++i) {
        const double point[1] = {sampler.next_double()};
        batch.add(point, point[0]);
    }
    const auto basis = BasisSet::polynomial(1, 1);
    const double direct = residual_estimate(fit_direct(batch, basis), batch);
    const double sgd = residual_estimate(solve_sgd(batch, basis), batch);
    // "Within 10%" needs a floor once the direct residual hits machine zero.
    const bool sgd_ok = sgd <= 1e-3 && sgd <= direct + 0.1 * std::max(direct, 1e-3);
    criterion.finish(gradient_ok && sgd_ok,
                     "gradient " + std::string(gradient_ok ? "ok" : "bad") + ", sgd residual " +
                         fmt(sgd) + " vs direct " + fmt(direct));
}

TEST_CASE("8: discontinuity sweep approaches the MC baseline") {
    Criterion criterion(8, "multilight error ratios", 120.0);
    ExperimentConfig cfg;
    cfg.integrand = IntegrandSpec::multi_light(1);
    cfg.orders = {2};
    cfg.budgets = {1024};
    cfg.replications = 500;
    cfg.seed = 17;
    const int counts[] = {1, 64};
    const auto rows = run_light_sweep(counts, cfg);
    REQUIRE(rows.size() == 2);
    const double few = rows[0].mse_ratio_vs_mc;
    const double many = rows[1].mse_ratio_vs_mc;
    const bool pass = few < 0.7 && many >= 0.8 && many <= 1.1 && few < many;
    criterion.finish(pass, "ratio(L=1)=" + fmt(few) + ", ratio(L=64)=" + fmt(many));
}

TEST_CASE("9: incremental estimator is unbiased and competitive") {
    Criterion criterion(9, "incremental estimator", 60.0);
    const int reps = 10000;

    std::vector<double> linear(reps);
    parallel_for(static_cast<std::size_t>(reps), 0, [&](std::size_t r) {
        Pcg32 rng(18, r);
        IncrementalEstimator inc(BasisSet::polynomial(1, 1));
        for (int i = 0; i < 256; ++i) {
            const double u[1] = {rng.next_double()};
            inc.add_sample(u, u[0]);
        }
        linear[r] = inc.estimate();
    });
    const auto s = testing::summarize(linear);
    const double dev = std::abs(s.mean - 0.5);
    const bool unbiased = dev <= 3.0 * s.std_error;

    const IntegrandSpec gaussian = IntegrandSpec::shifted_gaussian1d();
    std::vector<double> incremental(reps), plain(reps);
    parallel_for(static_cast<std::size_t>(reps), 0, [&](std::size_t r) {
        const SampleBatch batch = draw_batch(gaussian, 256, {19, r});
        incremental[r] =
            estimate_with(batch, BasisSet::polynomial(1, 3), SolverSpec::incremental(0.01))
                .estimate;
        plain[r] = mc_estimate(batch).estimate;
    });
    const double reference = gaussian.reference().value;
    const double mse_incremental = mse(incremental, reference);
    const double mse_plain = mse(plain, reference);
    const bool competitive = mse_incremental <= mse_plain;

    criterion.finish(unbiased && competitive,
                     "|dev|/se=" + fmt(dev / s.std_error) + ", MSE ratio vs MC " +
                         fmt(mse_incremental / mse_plain));
}

TEST_CASE("10: converge runs are byte-identical") {
    Criterion criterion(10, "CSV determinism", 60.0);
    const auto dir = std::filesystem::temp_directory_path();
    const auto first = dir / "regmc_acceptance_a.csv";
    const auto second = dir / "regmc_acceptance_b.csv";
    const std::string flags =
        "converge --integrand sumsin --dim 3 --order 1 --order 2 --solver matrix "
        "--n 16 --n 64 --n 256 --reps 100 --seed 21 --threads 2 --out ";
    const int rc_a = run_cli(flags + first.string());
    const int rc_b = run_cli(flags + second.string());
    const std::string text_a = slurp(first);
    const std::string text_b = slurp(second);
    const bool pass = rc_a == 0 && rc_b == 0 && !text_a.empty() && text_a == text_b;
    criterion.finish(pass, "bytes " + std::to_string(text_a.size()) + " vs " +
                               std::to_string(text_b.size()));
    std::filesystem::remove(first);
    std::filesystem::remove(second);
}
