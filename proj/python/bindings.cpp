#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "heavycoin/bounds.hpp"
#include "heavycoin/divergence.hpp"
#include "heavycoin/harness.hpp"
#include "heavycoin/mixture_detect.hpp"
#include "heavycoin/strategies.hpp"

namespace py = pybind11;
namespace hc = heavycoin;
using namespace pybind11::literals;

namespace {

py::dict batch_to_dict(const hc::ExperimentConfig& cfg, const hc::TrialBatchResult& r) {
  py::dict d;
  d["trials"] = r.trials;
  d["success_count"] = r.success_count;
  d["light_error_count"] = r.light_error_count;
  d["null_count"] = r.null_count;
  d["budget_count"] = r.budget_count;
  d["success_rate"] = r.success_rate();
  d["light_error_rate"] = r.light_error_rate();
  d["mean_T"] = r.mean_T;
  d["stddev_T"] = r.stddev_T;
  d["mean_N"] = r.mean_N;
  d["ci_success"] = r.ci_success;
  d["ci_light_error"] = r.ci_light_error;
  d["csv_row"] = hc::csv_row(cfg, r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "heavycoin native core";

  py::register_exception<hc::PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<hc::ArmFamily>(m, "ArmFamily")
      .def_static("bernoulli", &hc::ArmFamily::bernoulli)
      .def_static("gaussian", &hc::ArmFamily::gaussian, "sigma"_a)
      .def_static("bounded_beta", &hc::ArmFamily::bounded_beta, "concentration"_a)
      .def_static("parse", &hc::ArmFamily::parse, "name"_a, "scale"_a = 1.0)
      .def_property_readonly("name", [](const hc::ArmFamily& f) { return std::string(f.name()); })
      .def("admits", &hc::ArmFamily::admits)
      .def("__eq__", [](const hc::ArmFamily& a, const hc::ArmFamily& b) { return a == b; })
      .def("__repr__", [](const hc::ArmFamily& f) {
        return "ArmFamily(" + std::string(f.name()) + ")";
      });

  py::class_<hc::MixtureSpec>(m, "MixtureSpec")
      .def(py::init(&hc::MixtureSpec::make), "alpha"_a, "theta0"_a, "theta1"_a,
           "family"_a = hc::ArmFamily::bernoulli())
      .def_readonly("alpha", &hc::MixtureSpec::alpha)
      .def_readonly("theta0", &hc::MixtureSpec::theta0)
      .def_readonly("theta1", &hc::MixtureSpec::theta1)
      .def_readonly("family", &hc::MixtureSpec::family)
      .def_property_readonly("gap", &hc::MixtureSpec::gap);

  m.def("gaussian_tail_q", &hc::gaussian_tail_q, "x"_a);
  m.def("kl", &hc::kl, "family"_a, "theta_p"_a, "theta_q"_a);
  m.def("chi2", &hc::chi2, "family"_a, "theta_p"_a, "theta_q"_a);
  m.def("chi2_product", &hc::chi2_product, "family"_a, "theta_p"_a, "theta_q"_a, "m"_a);
  m.def("chi2_mixture_vs_single", &hc::chi2_mixture_vs_single, "spec"_a, "m"_a, "reference"_a);
  m.def("geometric_mixture_point", &hc::geometric_mixture_point, "spec"_a);
  m.def(
      "theorem3_constants",
      [](const hc::MixtureSpec& spec, std::uint64_t mm) {
        const auto c = hc::theorem3_constants(spec, mm);
        return py::dict("theta_star"_a = c.theta_star, "theta_minus"_a = c.theta_minus,
                        "theta_plus"_a = c.theta_plus, "kappa"_a = c.kappa,
                        "gamma"_a = c.gamma_envelope, "c"_a = c.c, "chi2_bound"_a = c.chi2_bound);
      },
      "spec"_a, "m"_a);

  py::class_<hc::FixedSampleConfig>(m, "FixedSampleConfig")
      .def(py::init(&hc::FixedSampleConfig::make), "alpha"_a, "theta0"_a, "theta1"_a, "delta"_a)
      .def_readonly("n_hat", &hc::FixedSampleConfig::n_hat)
      .def_readonly("m", &hc::FixedSampleConfig::m);

  py::class_<hc::SprtConfig>(m, "SprtConfig")
      .def(py::init(&hc::SprtConfig::make), "delta"_a, "alpha0"_a, "epsilon0"_a)
      .def_readonly("n", &hc::SprtConfig::n)
      .def_readonly("m", &hc::SprtConfig::m)
      .def_readonly("lower", &hc::SprtConfig::lower)
      .def_readonly("upper", &hc::SprtConfig::upper)
      .def_readonly("k1", &hc::SprtConfig::k1)
      .def_readonly("k2", &hc::SprtConfig::k2)
      .def_property_readonly("sample_cap", &hc::SprtConfig::sample_cap);

  m.def(
      "landmarks",
      [](int level) {
        std::vector<std::pair<double, double>> out;
        for (const auto& l : hc::landmarks(level)) out.emplace_back(l.alpha, l.epsilon);
        return out;
      },
      "level"_a);

  py::class_<hc::BoundReport>(m, "BoundReport")
      .def_readonly("value", &hc::BoundReport::value)
      .def_readonly("constant_known", &hc::BoundReport::constant_known)
      .def_readonly("branches", &hc::BoundReport::branches)
      .def_readonly("notes", &hc::BoundReport::notes)
      .def_readonly("theta_star", &hc::BoundReport::theta_star)
      .def_property_readonly("kind",
                             [](const hc::BoundReport& r) { return std::string(hc::to_string(r.kind)); })
      .def_property_readonly(
          "formula", [](const hc::BoundReport& r) { return std::string(hc::to_string(r.formula)); });

  m.def("lb_adaptive_known", &hc::lb_adaptive_known, "alpha"_a, "delta"_a, "family"_a, "theta0"_a,
        "theta1"_a);
  m.def("lb_fixed_known", &hc::lb_fixed_known, "alpha"_a, "delta"_a, "family"_a, "theta0"_a,
        "theta1"_a, "m"_a);
  m.def("lb_fixed_unknown", &hc::lb_fixed_unknown, "alpha"_a, "delta"_a, "theta0"_a, "theta1"_a,
        "m"_a);
  m.def(
      "ub_table1",
      [](const std::string& row, double alpha, double delta, double theta0, double theta1) {
        return hc::ub_table1(hc::parse_table1_row(row), alpha, delta, theta0, theta1);
      },
      "row"_a, "alpha"_a, "delta"_a, "theta0"_a, "theta1"_a);

  py::enum_<hc::Decision>(m, "Decision").value("H0", hc::Decision::H0).value("H1", hc::Decision::H1);

  py::class_<hc::GaussianTestPlan>(m, "GaussianTestPlan")
      .def_readonly("theta0", &hc::GaussianTestPlan::theta0)
      .def_readonly("theta1", &hc::GaussianTestPlan::theta1)
      .def_readonly("sigma", &hc::GaussianTestPlan::sigma)
      .def_readonly("alpha", &hc::GaussianTestPlan::alpha)
      .def_readonly("gamma", &hc::GaussianTestPlan::gamma)
      .def_readonly("epsilon_gap", &hc::GaussianTestPlan::epsilon_gap)
      .def_readonly("n", &hc::GaussianTestPlan::n)
      .def_readonly("error_bound", &hc::GaussianTestPlan::error_bound);

  m.def("plan_gaussian_test", &hc::plan_gaussian_test, "theta0"_a, "theta1"_a, "sigma"_a,
        "alpha"_a, "delta"_a);
  m.def(
      "run_gaussian_test",
      [](const hc::GaussianTestPlan& plan, const std::vector<double>& samples) {
        return hc::run_gaussian_test(plan, samples);
      },
      "plan"_a, "samples"_a);

  m.def(
      "simulate",
      [](const hc::MixtureSpec& spec, const std::string& strategy, double delta,
         std::uint64_t trials, std::uint64_t seed, std::uint64_t max_total_samples,
         unsigned threads, std::optional<double> alpha0, std::optional<double> epsilon0,
         std::optional<double> heavy_probability) {
        hc::ExperimentConfig cfg;
        cfg.spec = spec;
        cfg.strategy.kind = hc::parse_strategy(strategy);
        cfg.strategy.delta = delta;
        cfg.strategy.alpha0 = alpha0;
        cfg.strategy.epsilon0 = epsilon0;
        cfg.trials = trials;
        cfg.base_seed = seed;
        cfg.max_total_samples = max_total_samples;
        cfg.threads = threads;
        cfg.heavy_probability_override = heavy_probability;
        hc::TrialBatchResult r;
        {
          py::gil_scoped_release release;
          r = hc::run_batch(cfg);
        }
        return batch_to_dict(cfg, r);
      },
      "spec"_a, "strategy"_a = "adaptive-sprt", "delta"_a = 0.1, "trials"_a = 1000,
      "seed"_a = 0, "max_total_samples"_a = 100'000'000, "threads"_a = 0,
      "alpha0"_a = py::none(), "epsilon0"_a = py::none(), "heavy_probability"_a = py::none());

  m.def(
      "probe_lemma1",
      [](double slope, double offset, const std::string& walk, std::optional<std::uint64_t> horizon,
         std::uint64_t trials, std::uint64_t seed) {
        const auto h = horizon.value_or(hc::default_lemma_horizon(slope, offset));
        const auto r = hc::probe_lemma1(slope, offset, hc::parse_walk(walk), h, trials, seed);
        return py::dict("estimate"_a = r.estimate, "ci_radius"_a = r.ci_radius,
                        "bound"_a = r.bound, "crossings"_a = r.crossings, "horizon"_a = r.horizon);
      },
      "slope"_a, "offset"_a, "walk"_a = "rademacher", "horizon"_a = py::none(),
      "trials"_a = 100'000, "seed"_a = 0);
}
