#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpboot/blbquant.hpp"
#include "dpboot/bootstrap.hpp"
#include "dpboot/estimators.hpp"
#include "dpboot/experiments.hpp"
#include "dpboot/gdp.hpp"
#include "dpboot/tradeoff.hpp"
#include "dpboot/tradeoff_calculus.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::dict interval_dict(const dpboot::ConfidenceInterval& interval,
                       const std::vector<double>& estimate) {
  return py::dict("estimate"_a = estimate, "lower"_a = interval.lower,
                  "upper"_a = interval.upper, "level"_a = interval.level);
}

py::dict row_dict(const dpboot::ReportRow& r) {
  return py::dict("scenario"_a = r.scenario, "method"_a = r.method, "n"_a = r.n, "m"_a = r.m,
                  "B"_a = r.B, "mu"_a = r.mu, "alpha"_a = r.alpha, "coord"_a = r.coord,
                  "coverage"_a = r.coverage, "avg_length"_a = r.avg_length,
                  "avg_time_sec"_a = r.avg_time_sec, "replications"_a = r.replications,
                  "seed"_a = r.seed);
}

}  // namespace

PYBIND11_MODULE(_dpboot, m) {
  m.doc() = "Differentially private bootstrap confidence intervals";

  m.def("gdp_to_dp_delta", &dpboot::gdp_to_dp_delta, "mu"_a, "epsilon"_a);
  m.def("solve_epsilon", &dpboot::solve_epsilon, "mu"_a, "delta"_a);
  m.def("solve_mu", &dpboot::solve_mu, "epsilon"_a, "delta"_a);
  m.def("compose_gdp", &dpboot::compose_gdp, "mus"_a);
  m.def("group_privacy", &dpboot::group_privacy, "mu"_a, "k"_a);
  m.def("choose_m", &dpboot::choose_m, "n"_a, "B"_a);
  m.def("mu_b_star", &dpboot::mu_b_star, "m"_a, "n"_a, "B"_a, "mu"_a);
  m.def("bootstrap_inclusion_probs", &dpboot::bootstrap_inclusion_probs, "m"_a, "n"_a);
  m.def("asymptotic_privacy_check", &dpboot::asymptotic_privacy_check, "m"_a, "n"_a, "mu"_a,
        "b_grid"_a);

  py::class_<dpboot::TradeoffCurve>(m, "TradeoffCurve")
      .def_static("gaussian", &dpboot::TradeoffCurve::gaussian, "mu"_a)
      .def_static("identity", &dpboot::TradeoffCurve::identity)
      .def("__call__", [](const dpboot::TradeoffCurve& c, double alpha) { return c(alpha); })
      .def("functional_inverse", &dpboot::TradeoffCurve::functional_inverse)
      .def("asymmetry", &dpboot::TradeoffCurve::asymmetry)
      .def("grid", [](const dpboot::TradeoffCurve& c) {
        dpboot::TradeoffCurve g = c.to_grid();
        return py::make_tuple(g.alphas(), g.values());
      });
  m.def("mix_tradeoff", &dpboot::mix_tradeoff, "weights"_a, "curves"_a);
  m.def("cp_operator", &dpboot::cp_operator, "p"_a, "curve"_a);
  m.def("bootstrap_privacy_curve", &dpboot::bootstrap_privacy_curve, "m"_a, "n"_a, "mu_star"_a);
  m.def("tradeoff_functionals", [](const dpboot::TradeoffCurve& curve) {
    dpboot::Functionals f = dpboot::tradeoff_functionals(curve);
    return py::make_tuple(f.kl, f.kappa2, f.kappa3);
  });

  py::class_<dpboot::Sample>(m, "Sample")
      .def(py::init([](std::size_t dim, std::vector<double> features, std::vector<int> labels) {
             dpboot::Sample s;
             s.dim = dim;
             s.features = std::move(features);
             s.labels = std::move(labels);
             s.validate();
             return s;
           }),
           "dim"_a, "features"_a, "labels"_a = std::vector<int>{})
      .def_readonly("dim", &dpboot::Sample::dim)
      .def_readonly("features", &dpboot::Sample::features)
      .def_readonly("labels", &dpboot::Sample::labels)
      .def("size", &dpboot::Sample::size);

  py::class_<dpboot::EstimatorSpec>(m, "EstimatorSpec")
      .def_readonly("dimension", &dpboot::EstimatorSpec::dimension)
      .def_readonly("sensitivity_constant", &dpboot::EstimatorSpec::sensitivity_constant)
      .def("evaluate",
           [](const dpboot::EstimatorSpec& spec, const dpboot::Sample& data) {
             return spec.evaluate(data);
           });
  m.def("bounded_mean_estimator", &dpboot::bounded_mean_estimator, "lower"_a, "upper"_a);
  m.def("regularized_logistic_estimator", &dpboot::regularized_logistic_estimator, "dimension"_a);
  m.def("fit_regularized_logistic",
        [](const dpboot::Sample& data) { return dpboot::fit_regularized_logistic(data); });
  m.def("reference_minimizer", &dpboot::reference_minimizer, "data"_a);

  m.def(
      "sample_truncated_normal",
      [](std::size_t n, double lower, double upper, std::uint64_t seed) {
        dpboot::Rng rng(seed);
        return dpboot::sample_truncated_normal(n, lower, upper, rng);
      },
      "n"_a, "lower"_a, "upper"_a, "seed"_a);
  m.def(
      "synthesize_logistic_17d",
      [](std::size_t n, std::uint64_t seed) {
        dpboot::Rng rng(seed);
        return dpboot::synthesize_logistic_17d(n, rng);
      },
      "n"_a, "seed"_a);
  m.def(
      "synthesize_census_surrogate",
      [](std::size_t n, std::uint64_t seed) {
        dpboot::Rng rng(seed);
        return dpboot::synthesize_census_surrogate(n, rng);
      },
      "n"_a, "seed"_a);
  m.def("ingest_regression_csv", &dpboot::ingest_regression_csv, "path"_a);

  m.def(
      "gdp_bootstrap_ci",
      [](const dpboot::Sample& data, const dpboot::EstimatorSpec& estimator, int m, int B,
         double mu, double alpha, std::uint64_t seed, bool zero_noise) {
        dpboot::BootstrapConfig config;
        config.m = m;
        config.B = B;
        config.budget.mu = mu;
        config.zero_noise = zero_noise;
        dpboot::Rng rng(seed);
        dpboot::BootstrapDraws draws =
            dpboot::gdp_m_out_of_n_bootstrap(data, estimator, config, rng);
        dpboot::ConfidenceInterval interval = dpboot::bootstrap_ci(draws, data.size(), alpha);
        py::dict out = interval_dict(interval, draws.theta_bar);
        out["mu_star"] = draws.mu_star;
        return out;
      },
      "data"_a, "estimator"_a, "m"_a, "B"_a, "mu"_a, "alpha"_a, "seed"_a,
      "zero_noise"_a = false,
      "Noisy m-out-of-n bootstrap interval; mu is the per-stage budget");
  m.def(
      "blbquant_ci",
      [](const dpboot::Sample& data, const dpboot::EstimatorSpec& estimator, double epsilon,
         double delta, int B, double alpha, std::uint64_t seed, bool zero_noise) {
        dpboot::BLBConfig config;
        config.epsilon = epsilon;
        config.delta = delta;
        config.B = B;
        config.alpha = alpha;
        config.zero_noise = zero_noise;
        dpboot::Rng rng(seed);
        dpboot::BLBQuantResult result = dpboot::blbquant_ci(data, estimator, config, rng);
        return interval_dict(result.interval, result.theta_bar);
      },
      "data"_a, "estimator"_a, "epsilon"_a, "delta"_a, "B"_a = 500, "alpha"_a = 0.1,
      "seed"_a = 1, "zero_noise"_a = false);

  m.def(
      "coverage_study",
      [](const std::string& scenario, const std::string& method, std::size_t n, int B, double mu,
         double alpha, int replications, std::uint64_t seed, const std::string& data_path,
         std::size_t pool_size, bool zero_noise, int threads) {
        dpboot::ExperimentConfig config;
        config.scenario = dpboot::scenario_from_string(scenario);
        config.method = dpboot::method_from_string(method);
        config.n_values = {n};
        config.B_values = {B};
        config.mu_values = {mu};
        config.alpha = alpha;
        config.replications = replications;
        config.seed = seed;
        config.data_path = data_path;
        config.pool_size = pool_size;
        config.zero_noise = zero_noise;
        config.threads = threads;
        py::list rows;
        for (const auto& row : dpboot::run_coverage_study(config)) rows.append(row_dict(row));
        return rows;
      },
      "scenario"_a, "method"_a, "n"_a, "B"_a, "mu"_a, "alpha"_a = 0.05, "replications"_a = 100,
      "seed"_a = 1, "data_path"_a = "", "pool_size"_a = 100000, "zero_noise"_a = false,
      "threads"_a = 1);
}
