#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "regmc/experiment.hpp"
#include "regmc/quadrature.hpp"

namespace py = pybind11;
using namespace regmc;

namespace {

// Factories hand out immutable sets; pybind needs a non-const holder.
std::shared_ptr<BasisSet> unconst(std::shared_ptr<const BasisSet> basis) {
    return std::const_pointer_cast<BasisSet>(std::move(basis));
}

SolverSpec make_solver(const std::string& name, double sgd_rate, int sgd_epochs,
                       double incremental_rate) {
    SgdConfig sgd;
    sgd.learning_rate = sgd_rate;
    sgd.epochs = sgd_epochs;
    if (name == "plainmc") return SolverSpec::plain_mc();
    if (name == "matrix") return SolverSpec::direct();
    if (name == "sgd") return SolverSpec::sgd_solver(sgd);
    if (name == "incremental") return SolverSpec::incremental(incremental_rate);
    throw Error("InvalidConfig", "unknown solver '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Regression-based Monte Carlo integration: fit an integrable model function to "
              "integrand samples by least squares and use it as a control variate.";

    py::register_exception<Error>(m, "RegmcError");

    py::class_<RngConfig>(m, "RngConfig")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed") = 0, py::arg("stream") = 0)
        .def_readwrite("seed", &RngConfig::seed)
        .def_readwrite("stream", &RngConfig::stream);

    py::class_<Pcg32>(m, "Pcg32")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed") = 0, py::arg("stream") = 0)
        .def("next_u32", &Pcg32::next_u32)
        .def("next_double", &Pcg32::next_double);

    py::class_<SampleBatch>(m, "SampleBatch")
        .def(py::init<int>(), py::arg("dim"))
        .def("add",
             [](SampleBatch& b, const std::vector<double>& point, double value) {
                 b.add(point, value);
             },
             py::arg("point"), py::arg("value"))
        .def("point",
             [](const SampleBatch& b, std::size_t i) {
                 const auto p = b.point(i);
                 return std::vector<double>(p.begin(), p.end());
             })
        .def("value", &SampleBatch::value)
        .def_property_readonly("dim", &SampleBatch::dim)
        .def_property_readonly("values",
                               [](const SampleBatch& b) { return b.values(); })
        .def("__len__", &SampleBatch::size);

    py::enum_<Solver>(m, "Solver")
        .value("PlainMc", Solver::PlainMc)
        .value("DirectMatrix", Solver::DirectMatrix)
        .value("Sgd", Solver::Sgd)
        .value("Incremental", Solver::Incremental);

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("estimate", &EstimateReport::estimate)
        .def_readonly("model_integral", &EstimateReport::model_integral)
        .def_readonly("difference_mean", &EstimateReport::difference_mean)
        .def_readonly("n_samples", &EstimateReport::n_samples)
        .def_readonly("residual_estimate", &EstimateReport::residual_estimate)
        .def_readonly("solver", &EstimateReport::solver)
        .def("__repr__", [](const EstimateReport& r) {
            std::ostringstream s;
            s << "EstimateReport(estimate=" << r.estimate << ", model_integral="
              << r.model_integral << ", difference_mean=" << r.difference_mean
              << ", n=" << r.n_samples << ", residual=" << r.residual_estimate
              << ", solver=" << solver_name(r.solver) << ")";
            return s.str();
        });

    py::class_<BasisSet, std::shared_ptr<BasisSet>>(m, "BasisSet")
        .def_static("polynomial",
                    [](int dim, int order) { return unconst(BasisSet::polynomial(dim, order)); },
                    py::arg("dim"), py::arg("order"))
        .def_static("step",
                    [](int dim, int cells) { return unconst(BasisSet::step(dim, cells)); },
                    py::arg("dim"), py::arg("cells_per_axis"))
        .def_static("gaussian",
                    [](int dim, int centers, double width) {
                        return unconst(BasisSet::gaussian(dim, centers, width));
                    },
                    py::arg("dim"), py::arg("centers_per_axis"), py::arg("width"))
        .def_static("sine",
                    [](int dim, int max_freq) { return unconst(BasisSet::sine(dim, max_freq)); },
                    py::arg("dim"), py::arg("max_freq"))
        .def_property_readonly("dim", &BasisSet::dim)
        .def_property_readonly("count", &BasisSet::count)
        .def_property_readonly("integrals",
                               [](const BasisSet& b) {
                                   return std::vector<double>(
                                       b.integrals().data(),
                                       b.integrals().data() + b.integrals().size());
                               })
        .def("evaluate", [](const BasisSet& b, const std::vector<double>& u) {
            const Eigen::VectorXd v = b.evaluate(u);
            return std::vector<double>(v.data(), v.data() + v.size());
        });

    py::class_<ModelFunction>(m, "ModelFunction")
        .def_property_readonly("theta",
                               [](const ModelFunction& f) {
                                   return std::vector<double>(
                                       f.theta().data(), f.theta().data() + f.theta().size());
                               })
        .def("evaluate",
             [](const ModelFunction& f, const std::vector<double>& u) { return f.evaluate(u); })
        .def("integral", &ModelFunction::integral);

    m.def("mc_estimate", &mc_estimate, py::arg("batch"));
    m.def("mse",
          [](const std::vector<double>& estimates, double reference) {
              return mse(estimates, reference);
          },
          py::arg("estimates"), py::arg("reference"));
    m.def("rel_mse",
          [](const std::vector<double>& estimates, double reference) {
              return rel_mse(estimates, reference);
          },
          py::arg("estimates"), py::arg("reference"));

    m.def("fit_direct",
          [](const SampleBatch& batch, std::shared_ptr<BasisSet> basis) {
              return fit_direct(batch, basis);
          },
          py::arg("batch"), py::arg("basis"));
    m.def("solve_sgd",
          [](const SampleBatch& batch, std::shared_ptr<BasisSet> basis, double learning_rate,
             int epochs, bool shuffle, std::uint64_t shuffle_seed) {
              SgdConfig cfg;
              cfg.learning_rate = learning_rate;
              cfg.epochs = epochs;
              cfg.shuffle = shuffle;
              cfg.rng.seed = shuffle_seed;
              return solve_sgd(batch, basis, cfg);
          },
          py::arg("batch"), py::arg("basis"), py::arg("learning_rate") = 0.01,
          py::arg("epochs") = 4, py::arg("shuffle") = true,
          py::arg("shuffle_seed") = 0x5eed5eed5eed5eedULL);
    m.def("residual_estimate", &residual_estimate, py::arg("model"), py::arg("batch"));

    m.def("cv_estimate",
          [](const SampleBatch& batch, std::shared_ptr<BasisSet> basis, const std::string& solver,
             bool cross_fit, double sgd_rate, int sgd_epochs) {
              return cv_estimate(batch, basis, make_solver(solver, sgd_rate, sgd_epochs, 0.01),
                                 cross_fit);
          },
          py::arg("batch"), py::arg("basis"), py::arg("solver") = "matrix",
          py::arg("cross_fit") = false, py::arg("sgd_rate") = 0.01, py::arg("sgd_epochs") = 4);

    py::class_<IncrementalEstimator>(m, "IncrementalEstimator")
        .def(py::init([](std::shared_ptr<BasisSet> basis, double learning_rate, bool harmonic) {
                 SgdConfig cfg;
                 cfg.learning_rate = learning_rate;
                 return IncrementalEstimator(basis, cfg,
                                             harmonic ? IncrementalEstimator::Rate::Harmonic
                                                      : IncrementalEstimator::Rate::Constant);
             }),
             py::arg("basis"), py::arg("learning_rate") = 0.01, py::arg("harmonic") = false)
        .def("add_sample",
             [](IncrementalEstimator& e, const std::vector<double>& u, double f) {
                 e.add_sample(u, f);
             },
             py::arg("point"), py::arg("value"))
        .def_property_readonly("count", &IncrementalEstimator::count)
        .def_property_readonly("estimate", &IncrementalEstimator::estimate)
        .def("model", &IncrementalEstimator::model)
        .def("report", &IncrementalEstimator::report);

    py::class_<MisSample>(m, "MisSample")
        .def(py::init([](std::vector<double> point, double weighted_value, int technique) {
                 return MisSample{std::move(point), weighted_value, technique};
             }),
             py::arg("point"), py::arg("weighted_value"), py::arg("technique"))
        .def_readwrite("point", &MisSample::point)
        .def_readwrite("weighted_value", &MisSample::weighted_value)
        .def_readwrite("technique", &MisSample::technique);

    m.def("mis_cv_estimate",
          [](const std::vector<MisSample>& samples, std::shared_ptr<BasisSet> basis,
             const std::string& solver, double sgd_rate, int sgd_epochs) {
              return mis_cv_estimate(samples, basis,
                                     make_solver(solver, sgd_rate, sgd_epochs, 0.01));
          },
          py::arg("samples"), py::arg("basis"), py::arg("solver") = "matrix",
          py::arg("sgd_rate") = 0.01, py::arg("sgd_epochs") = 4);
    m.def("mis_toy_sample", [](Pcg32& rng, int technique) { return mis_toy_sample(rng, technique); },
          py::arg("rng"), py::arg("technique"));

    py::class_<IntegrandSpec>(m, "IntegrandSpec")
        .def_static("step1d", &IntegrandSpec::step1d, py::arg("threshold") = 0.5,
                    py::arg("lo") = 0.0, py::arg("hi") = 1.0)
        .def_static("shifted_gaussian1d", &IntegrandSpec::shifted_gaussian1d,
                    py::arg("center") = 0.6, py::arg("width") = 0.1)
        .def_static("high_freq1d", &IntegrandSpec::high_freq1d, py::arg("frequency") = 10)
        .def_static("poly1d", py::overload_cast<>(&IntegrandSpec::poly1d))
        .def_static("sum_sin", &IntegrandSpec::sum_sin, py::arg("dim"))
        .def_static("exp_sum", &IntegrandSpec::exp_sum, py::arg("dim"))
        .def_static("multi_light", &IntegrandSpec::multi_light, py::arg("lights"))
        .def_static("mis_toy", &IntegrandSpec::mis_toy)
        .def_property_readonly("dim", [](const IntegrandSpec& s) { return s.dim; })
        .def_property_readonly("name", &IntegrandSpec::name)
        .def("evaluate",
             [](const IntegrandSpec& s, const std::vector<double>& u) { return s.evaluate(u); })
        .def("reference", [](const IntegrandSpec& s) {
            const Reference r = s.reference();
            return py::make_tuple(r.value, r.tolerance);
        });

    m.def("draw_batch",
          [](const IntegrandSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
              return draw_batch(spec, n, {seed, stream});
          },
          py::arg("integrand"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("integrand", &ConvergenceRow::integrand)
        .def_readonly("dim", &ConvergenceRow::dim)
        .def_readonly("basis", &ConvergenceRow::basis)
        .def_readonly("order", &ConvergenceRow::order)
        .def_readonly("solver", &ConvergenceRow::solver)
        .def_readonly("n", &ConvergenceRow::n)
        .def_readonly("replications", &ConvergenceRow::replications)
        .def_readonly("mean_estimate", &ConvergenceRow::mean_estimate)
        .def_readonly("reference", &ConvergenceRow::reference)
        .def_readonly("mse", &ConvergenceRow::mse)
        .def_readonly("rel_mse", &ConvergenceRow::rel_mse)
        .def_readonly("mse_ratio_vs_mc", &ConvergenceRow::mse_ratio_vs_mc)
        .def_readonly("wall_time_seconds", &ConvergenceRow::wall_time_seconds);

    m.def("run_convergence",
          [](const IntegrandSpec& integrand, const std::string& solver,
             const std::vector<int>& orders, const std::vector<int>& budgets, int replications,
             std::uint64_t seed, bool cross_fit, double sgd_rate, int sgd_epochs) {
              ExperimentConfig cfg;
              cfg.integrand = integrand;
              cfg.solver = make_solver(solver, sgd_rate, sgd_epochs, 0.01);
              cfg.orders = orders;
              cfg.budgets = budgets;
              cfg.replications = replications;
              cfg.seed = seed;
              cfg.cross_fit = cross_fit;
              return run_convergence(cfg);
          },
          py::arg("integrand"), py::arg("solver") = "matrix",
          py::arg("orders") = std::vector<int>{1, 2},
          py::arg("budgets") = std::vector<int>{16, 64, 256, 1024},
          py::arg("replications") = 100, py::arg("seed") = 0, py::arg("cross_fit") = false,
          py::arg("sgd_rate") = 0.01, py::arg("sgd_epochs") = 4);

    m.def("rows_to_csv", [](const std::vector<ConvergenceRow>& rows) {
        std::ostringstream out;
        write_csv(out, rows);
        return out.str();
    });
}
