#include <cmath>
#include <ostream>
#include <string>

#include "regmc/experiment.hpp"
#include "regmc/quadrature.hpp"

namespace regmc {

namespace {

struct CheckLog {
    std::ostream& out;
    bool all_ok = true;

    void record(const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << '\n';
        all_ok = all_ok && ok;
    }
};

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

void check_rng(CheckLog& log) {
    Pcg32 a(42, 7);
    Pcg32 b(42, 7);
    Pcg32 c(42, 8);
    bool identical = true;
    bool distinct = false;
    for (int i = 0; i < 1000; ++i) {
        const double va = a.next_double();
        identical = identical && va == b.next_double();
        distinct = distinct || va != c.next_double();
    }
    log.record("rng-reproducible-streams", identical && distinct, "");
}

void check_basis_integrals(CheckLog& log) {
    struct Case {
        std::shared_ptr<const BasisSet> basis;
        const char* label;
    };
    const Case cases[] = {
        {BasisSet::polynomial(1, 3), "poly"},
        {BasisSet::step(1, 4), "step"},
        {BasisSet::gaussian(1, 3, 0.25), "gaussian"},
        {BasisSet::sine(1, 2), "sine"},
    };
    double worst = 0.0;
    for (const Case& c : cases) {
        for (std::size_t q = 0; q < c.basis->count(); ++q) {
            const auto f = [&](double x) {
                const double u[1] = {x};
                return c.basis->evaluate(u)[static_cast<Eigen::Index>(q)];
            };
            // Aligned midpoint handles the discontinuous family exactly;
            // Simpson covers the smooth ones.
            const double oracle = c.basis->kind() == BasisKind::Step
                                      ? quadrature::midpoint(f, 100000)
                                      : quadrature::simpson(f, 100000);
            const double err = std::abs(c.basis->integral(q) - oracle) /
                               std::max(1e-3, std::abs(oracle));
            worst = std::max(worst, err);
        }
    }
    log.record("basis-integrals-vs-quadrature", worst < 1e-10,
               "worst rel err " + std::to_string(worst));
}

void check_constant_component(CheckLog& log) {
    Pcg32 rng(3, 0);
    bool ok = true;
    const auto bases = {BasisSet::polynomial(3, 2), BasisSet::step(2, 3),
                        BasisSet::gaussian(2, 2, 0.3), BasisSet::sine(2, 2)};
    for (const auto& basis : bases) {
        std::vector<double> u(static_cast<std::size_t>(basis->dim()));
        for (int i = 0; i < 16; ++i) {
            rng.fill(u);
            ok = ok && basis->evaluate(u)[0] == 1.0;
        }
    }
    log.record("basis-constant-component", ok, "");
}

void check_reduction_to_mc(CheckLog& log) {
    const auto integrands = builtin_integrands();
    Pcg32 rng(11, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const IntegrandSpec& spec = integrands[trial % integrands.size()];
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next_below(1021));
        const SampleBatch batch = draw_batch(spec, n, {101, static_cast<std::uint64_t>(trial)});
        const auto basis = BasisSet::polynomial(spec.dim, 0);
        const SolverSpec solver =
            trial % 2 == 0 ? SolverSpec::direct() : SolverSpec::sgd_solver();
        const double cv = cv_estimate(batch, basis, solver).estimate;
        const double mc = mc_estimate(batch).estimate;
        double scale = std::abs(mc);
        for (double v : batch.values()) scale = std::max(scale, std::abs(v));
        worst = std::max(worst, std::abs(cv - mc) / std::max(scale, 1e-300));
    }
    log.record("constant-basis-reduces-to-mc", worst < 1e-13,
               "worst rel dev " + std::to_string(worst));
}

void check_residual_optimality(CheckLog& log) {
    Pcg32 rng(17, 0);
    const auto integrands = builtin_integrands();
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const IntegrandSpec& spec = integrands[trial % integrands.size()];
        const std::size_t n = 8 + static_cast<std::size_t>(rng.next_below(56));
        const SampleBatch batch = draw_batch(spec, n, {55, static_cast<std::uint64_t>(trial)});
        std::shared_ptr<const BasisSet> basis;
        switch (trial % 4) {
            case 0: basis = BasisSet::polynomial(spec.dim, 2); break;
            case 1: basis = BasisSet::step(spec.dim, 2); break;
            case 2: basis = BasisSet::gaussian(spec.dim, 2, 0.3); break;
            default: basis = BasisSet::sine(spec.dim, 1); break;
        }
        const double fitted = residual_estimate(fit_direct(batch, basis), batch);
        const double constant =
            residual_estimate(fit_direct(batch, BasisSet::polynomial(spec.dim, 0)), batch);
        ok = fitted <= constant + 1e-12;
    }
    log.record("residual-below-constant-fit", ok, "");
}

void check_exact_span(CheckLog& log) {
    const IntegrandSpec spec = IntegrandSpec::poly1d();
    const SampleBatch batch = draw_batch(spec, 64, {77, 0});
    const auto basis = BasisSet::polynomial(1, 5);
    const double residual = residual_estimate(fit_direct(batch, basis), batch);
    double mean_sq = 0.0;
    for (double v : batch.values()) mean_sq += v * v;
    mean_sq /= static_cast<double>(batch.size());
    const bool ok = residual <= 1e-16 * std::max(1.0, mean_sq);
    log.record("exact-span-recovery", ok, "residual " + std::to_string(residual));
}

void check_normal_equations(CheckLog& log) {
    const IntegrandSpec spec = IntegrandSpec::shifted_gaussian1d();
    const SampleBatch batch = draw_batch(spec, 256, {88, 0});
    const auto basis = BasisSet::polynomial(1, 3);
    NormalSystem system(basis);
    system.accumulate(batch);
    const ModelFunction model = solve_direct(system);
    const Eigen::MatrixXd a = system.matrix();
    const double gap = (a * model.theta() - system.rhs()).norm();
    const double scale = a.norm() * model.theta().norm() + system.rhs().norm();
    log.record("normal-equation-residual", gap <= 1e-9 * scale,
               "|A t - b| = " + std::to_string(gap));
}

void check_sgd_gradient(CheckLog& log) {
    Pcg32 rng(23, 0);
    const auto basis = BasisSet::polynomial(2, 3);
    const auto m = static_cast<Eigen::Index>(basis->count());
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        std::vector<double> u = {rng.next_double(), rng.next_double()};
        Eigen::VectorXd theta(m);
        for (Eigen::Index q = 0; q < m; ++q) theta[q] = 2.0 * rng.next_double() - 1.0;
        const double f = 2.0 * rng.next_double() - 1.0;
        const Eigen::VectorXd p = basis->evaluate(u);
        const Eigen::VectorXd analytic = -2.0 * (f - theta.dot(p)) * p;
        const double h = 0.5;  // the loss is quadratic in theta, so any step is exact
        for (Eigen::Index q = 0; q < m; ++q) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[q] += h;
            tm[q] -= h;
            const double rp = (f - tp.dot(p)) * (f - tp.dot(p));
            const double rm = (f - tm.dot(p)) * (f - tm.dot(p));
            const double fd = (rp - rm) / (2.0 * h);
            const double denom = std::max({std::abs(analytic[q]), std::abs(fd), 1e-8});
            ok = ok && std::abs(analytic[q] - fd) / denom < 1e-6;
        }
    }
    log.record("sgd-gradient-vs-finite-differences", ok, "");
}

void check_metrics(CheckLog& log) {
    const double flat[] = {2.0, 2.0, 2.0};
    const double split[] = {1.0, 3.0};
    const double single[] = {1.0};
    bool ok = mse(flat, 2.0) == 0.0 && mse(split, 2.0) == 1.0 &&
              rel_diff(rel_mse(single, 0.0), 100.0) < 1e-12;
    log.record("error-metrics", ok, "");
}

}  // namespace

bool run_validation(std::ostream& out) {
    CheckLog log{out};
    check_rng(log);
    check_basis_integrals(log);
    check_constant_component(log);
    check_reduction_to_mc(log);
    check_residual_optimality(log);
    check_exact_span(log);
    check_normal_equations(log);
    check_sgd_gradient(log);
    check_metrics(log);
    out << (log.all_ok ? "validation passed" : "validation FAILED") << '\n';
    return log.all_ok;
}

}  // namespace regmc
