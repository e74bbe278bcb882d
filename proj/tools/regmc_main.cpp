#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "regmc/experiment.hpp"

namespace {

struct CliOptions {
    std::string integrand = "sumsin";
    int dim = 0;
    std::string basis = "poly";
    std::vector<int> orders;
    std::string solver = "matrix";
    std::vector<int> budgets;
    int reps = 100;
    std::uint64_t seed = 0;
    bool cross_fit = false;
    std::string out = "-";
    std::vector<int> lights;
    double sgd_rate = 0.01;
    int sgd_epochs = 4;
    double incremental_rate = 0.01;
    int threads = 0;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--integrand", opt.integrand,
                    "step|gaussian|highfreq|poly|sumsin|expsum|multilight|mistoy");
    cmd->add_option("--dim", opt.dim, "dimension for sumsin/expsum");
    cmd->add_option("--basis", opt.basis, "poly|constant|step|gaussian|sine");
    cmd->add_option("--order", opt.orders, "basis order (repeatable)");
    cmd->add_option("--solver", opt.solver, "plainmc|matrix|sgd|incremental");
    cmd->add_option("--n", opt.budgets, "sample budget (repeatable, ascending)");
    cmd->add_option("--reps", opt.reps, "replications per budget");
    cmd->add_option("--seed", opt.seed, "base seed");
    cmd->add_flag("--cross-fit", opt.cross_fit, "fit each half, evaluate on the other");
    cmd->add_option("--out", opt.out, "output CSV path ('-' for stdout)");
    cmd->add_option("--sgd-rate", opt.sgd_rate, "SGD learning rate");
    cmd->add_option("--sgd-epochs", opt.sgd_epochs, "SGD passes over the batch");
    cmd->add_option("--incremental-rate", opt.incremental_rate, "incremental learning rate");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
}

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << '\n';
    return 2;
}

bool parse_solver(const CliOptions& opt, regmc::SolverSpec& solver) {
    regmc::SgdConfig sgd;
    sgd.learning_rate = opt.sgd_rate;
    sgd.epochs = opt.sgd_epochs;
    if (opt.solver == "plainmc") solver = regmc::SolverSpec::plain_mc();
    else if (opt.solver == "matrix") solver = regmc::SolverSpec::direct();
    else if (opt.solver == "sgd") solver = regmc::SolverSpec::sgd_solver(sgd);
    else if (opt.solver == "incremental") solver = regmc::SolverSpec::incremental(opt.incremental_rate);
    else return false;
    solver.sgd = sgd;
    return true;
}

bool parse_basis(const CliOptions& opt, regmc::ExperimentConfig& cfg) {
    if (opt.basis == "poly" || opt.basis == "polynomial") {
        cfg.basis_kind = regmc::BasisKind::Polynomial;
    } else if (opt.basis == "constant") {
        cfg.basis_kind = regmc::BasisKind::Polynomial;
        cfg.orders = {0};
    } else if (opt.basis == "step") {
        cfg.basis_kind = regmc::BasisKind::Step;
    } else if (opt.basis == "gaussian") {
        cfg.basis_kind = regmc::BasisKind::GaussianMixture;
    } else if (opt.basis == "sine") {
        cfg.basis_kind = regmc::BasisKind::Sine;
    } else {
        return false;
    }
    return true;
}

int build_config(const CliOptions& opt, std::vector<int> default_orders,
                 std::vector<int> default_budgets, regmc::ExperimentConfig& cfg) {
    const int lights = opt.lights.empty() ? 8 : opt.lights.front();
    const auto integrand = regmc::integrand_by_name(opt.integrand, opt.dim, lights);
    if (!integrand) return usage_error("unknown integrand '" + opt.integrand + "'");
    if (opt.dim > 0 && integrand->dim != opt.dim &&
        (integrand->id != regmc::IntegrandId::SumSin &&
         integrand->id != regmc::IntegrandId::ExpSum))
        return usage_error("--dim is fixed at " + std::to_string(integrand->dim) + " for '" +
                           opt.integrand + "'");
    cfg.integrand = *integrand;
    cfg.orders = opt.orders.empty() ? std::move(default_orders) : opt.orders;
    if (!parse_basis(opt, cfg)) return usage_error("unknown basis '" + opt.basis + "'");
    if (!parse_solver(opt, cfg.solver)) return usage_error("unknown solver '" + opt.solver + "'");
    cfg.budgets = opt.budgets.empty() ? std::move(default_budgets) : opt.budgets;
    cfg.replications = opt.reps;
    cfg.seed = opt.seed;
    cfg.cross_fit = opt.cross_fit;
    cfg.threads = opt.threads;
    return 0;
}

int emit(const std::string& path, const std::vector<regmc::ConvergenceRow>& rows) {
    if (path == "-") {
        regmc::write_csv(std::cout, rows);
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return 1;
    }
    regmc::write_csv(out, rows);
    out.flush();
    if (!out) {
        std::cerr << "error: failed to write '" << path << "'\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regression-based Monte Carlo integration benchmark"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* converge = app.add_subcommand(
        "converge", "MSE vs sample budget for one solver, paired against plain MC");
    add_common_flags(converge, opt);

    CLI::App* lights_cmd = app.add_subcommand(
        "lights", "error ratio vs number of lights for the multilight integrand");
    add_common_flags(lights_cmd, opt);
    lights_cmd->add_option("--lights", opt.lights, "light counts to sweep (repeatable)");

    CLI::App* solvers = app.add_subcommand(
        "solvers", "direct matrix vs SGD over identical streams, with fit wall time");
    add_common_flags(solvers, opt);

    CLI::App* validate = app.add_subcommand("validate", "run the library invariant checks");
    (void)validate;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("validate")) return regmc::run_validation(std::cout) ? 0 : 1;

        if (app.got_subcommand("converge")) {
            regmc::ExperimentConfig cfg;
            if (int rc = build_config(opt, {1, 2}, {16, 64, 256, 1024}, cfg)) return rc;
            return emit(opt.out, regmc::run_convergence(cfg));
        }

        if (app.got_subcommand("lights")) {
            CliOptions lopt = opt;
            lopt.integrand = "multilight";
            regmc::ExperimentConfig cfg;
            if (int rc = build_config(lopt, {1, 2, 3}, {1024}, cfg)) return rc;
            const std::vector<int> counts =
                opt.lights.empty() ? std::vector<int>{1, 2, 4, 8, 16, 32, 64} : opt.lights;
            return emit(opt.out, regmc::run_light_sweep(counts, cfg));
        }

        // solvers
        regmc::ExperimentConfig cfg;
        if (int rc = build_config(opt, {2}, {256, 1024, 4096}, cfg)) return rc;
        return emit(opt.out, regmc::run_solver_compare(cfg));
    } catch (const regmc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == "InvalidConfig" || e.code() == "InvalidDimension" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
