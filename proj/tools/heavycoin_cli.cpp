// heavycoin command-line driver.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heavycoin/bounds.hpp"
#include "heavycoin/divergence.hpp"
#include "heavycoin/harness.hpp"
#include "heavycoin/mixture_detect.hpp"

using nlohmann::json;
namespace hc = heavycoin;

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Reals in JSON output; +inf becomes the string "infinite".
json real(double x) {
  if (std::isinf(x)) return x > 0 ? "infinite" : "-infinite";
  if (std::isnan(x)) return nullptr;
  return x;
}

struct InstanceFlags {
  std::string family = "bernoulli";
  double scale = 1.0;
  double alpha = 0.2;
  double theta0 = 0.4;
  double theta1 = 0.7;
  double delta = 0.1;
};

void add_instance_flags(CLI::App* app, InstanceFlags& f) {
  app->add_option("--family", f.family, "bernoulli, gaussian or beta")->capture_default_str();
  app->add_option("--sigma,--concentration", f.scale,
                  "Gaussian sigma or beta concentration")->capture_default_str();
  app->add_option("--alpha", f.alpha, "Heavy-arm probability")->capture_default_str();
  app->add_option("--theta0", f.theta0, "Light mean")->capture_default_str();
  app->add_option("--theta1", f.theta1, "Heavy mean")->capture_default_str();
  app->add_option("--delta", f.delta, "Failure probability")->capture_default_str();
}

hc::ArmFamily family_of(const InstanceFlags& f) { return hc::ArmFamily::parse(f.family, f.scale); }

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string csv_document(const std::vector<std::string>& rows) {
  std::string doc = hc::csv_header() + "\n";
  for (const auto& r : rows) doc += r + "\n";
  return doc;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  InstanceFlags inst;
  std::string strategy = "adaptive-sprt";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 100'000'000;
  unsigned threads = 0;
  std::string out;
  std::string trace;
  std::string config;
  std::optional<double> alpha0, epsilon0, assumed_theta0, assumed_theta1, heavy_probability;
};

template <typename T>
void take(const json& j, const char* key, T& dst, const CLI::App* app, const char* flag) {
  if (!j.contains(key)) return;
  if (app->count(flag) > 0) return;
  dst = j.at(key).get<T>();
}

template <typename T>
void take_opt(const json& j, const char* key, std::optional<T>& dst, const CLI::App* app,
              const char* flag) {
  if (!j.contains(key) || app->count(flag) > 0) return;
  dst = j.at(key).get<T>();
}

void merge_config(SimulateFlags& f, const CLI::App* app) {
  std::ifstream in(f.config);
  if (!in) throw std::runtime_error("cannot read config " + f.config);
  const json j = json::parse(in);
  const json& spec = j.contains("spec") ? j.at("spec") : j;
  take(spec, "family", f.inst.family, app, "--family");
  take(spec, "sigma", f.inst.scale, app, "--sigma");
  take(spec, "concentration", f.inst.scale, app, "--sigma");
  take(spec, "alpha", f.inst.alpha, app, "--alpha");
  take(spec, "theta0", f.inst.theta0, app, "--theta0");
  take(spec, "theta1", f.inst.theta1, app, "--theta1");
  const json& strat = j.contains("strategy") && j.at("strategy").is_object() ? j.at("strategy") : j;
  if (j.contains("strategy") && j.at("strategy").is_string()) {
    take(j, "strategy", f.strategy, app, "--strategy");
  } else {
    take(strat, "kind", f.strategy, app, "--strategy");
  }
  take(strat, "delta", f.inst.delta, app, "--delta");
  take(j, "delta", f.inst.delta, app, "--delta");
  take_opt(strat, "alpha0", f.alpha0, app, "--alpha0");
  take_opt(strat, "epsilon0", f.epsilon0, app, "--epsilon0");
  take_opt(strat, "theta0", f.assumed_theta0, app, "--assumed-theta0");
  take_opt(strat, "theta1", f.assumed_theta1, app, "--assumed-theta1");
  take(j, "trials", f.trials, app, "--trials");
  take(j, "base_seed", f.seed, app, "--seed");
  take(j, "max_total_samples", f.max_samples, app, "--max-samples");
  take(j, "threads", f.threads, app, "--threads");
  take(j, "output", f.out, app, "--out");
  take_opt(j, "heavy_probability", f.heavy_probability, app, "--heavy-probability");
}

int run_simulate(SimulateFlags& f, const CLI::App* app) {
  if (!f.config.empty()) merge_config(f, app);
  hc::ExperimentConfig cfg;
  cfg.spec = hc::MixtureSpec::make(f.inst.alpha, f.inst.theta0, f.inst.theta1, family_of(f.inst));
  cfg.strategy.kind = hc::parse_strategy(f.strategy);
  cfg.strategy.delta = f.inst.delta;
  cfg.strategy.alpha0 = f.alpha0;
  cfg.strategy.epsilon0 = f.epsilon0;
  cfg.strategy.theta0 = f.assumed_theta0;
  cfg.strategy.theta1 = f.assumed_theta1;
  cfg.trials = f.trials;
  cfg.base_seed = f.seed;
  cfg.max_total_samples = f.max_samples;
  cfg.threads = f.threads;
  cfg.heavy_probability_override = f.heavy_probability;
  cfg.trace_first_trial = !f.trace.empty();
  cfg.output = f.out;

  const hc::TrialBatchResult result = hc::run_batch(cfg);
  emit(csv_document({hc::csv_row(cfg, result)}), f.out);
  if (!f.trace.empty()) {
    std::ostringstream os;
    hc::write_trace_jsonl(os, result.first_trace);
    emit(os.str(), f.trace);
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::vector<double> alphas{0.2};
  std::vector<double> epsilons{0.3};
  std::vector<double> inverse_budgets;
  std::vector<std::string> strategies{"adaptive-sprt"};
  std::string family = "bernoulli";
  double scale = 1.0;
  double center = 0.5;
  double delta = 0.1;
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 100'000'000;
  unsigned threads = 0;
  std::string out;
};

int run_sweep(const SweepFlags& f) {
  hc::SweepConfig cfg;
  cfg.family = hc::ArmFamily::parse(f.family, f.scale);
  cfg.center = f.center;
  cfg.delta = f.delta;
  cfg.trials = f.trials;
  cfg.base_seed = f.seed;
  cfg.max_total_samples = f.max_samples;
  cfg.threads = f.threads;
  for (const auto& s : f.strategies) cfg.strategies.push_back(hc::parse_strategy(s));
  for (double a : f.alphas) {
    if (!f.inverse_budgets.empty()) {
      // epsilon solves 1 / (alpha epsilon^2) = H
      for (double h : f.inverse_budgets) {
        if (!(h > 0.0)) throw hc::PreconditionError("inverse budget must be > 0");
        cfg.points.push_back({a, std::sqrt(1.0 / (a * h))});
      }
    } else {
      for (double e : f.epsilons) cfg.points.push_back({a, e});
    }
  }
  std::vector<std::string> rows;
  for (const auto& row : hc::sweep(cfg)) rows.push_back(hc::csv_row(row.config, row.result));
  emit(csv_document(rows), f.out);
  return 0;
}

// ---------------------------------------------------------------- bounds

struct BoundsFlags {
  InstanceFlags inst;
  std::optional<std::uint64_t> m;
  bool as_json = false;
};

json report_json(const hc::BoundReport& r) {
  json j;
  j["formula"] = hc::to_string(r.formula);
  j["kind"] = hc::to_string(r.kind);
  j["value"] = real(r.value);
  j["constant_known"] = r.constant_known;
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = real(v);
  j["inputs"] = inputs;
  json branches = json::object();
  for (const auto& [k, v] : r.branches) branches[k] = real(v);
  j["branches"] = branches;
  j["notes"] = r.notes;
  if (r.theta_star) j["theta_star"] = *r.theta_star;
  return j;
}

int run_bounds(const BoundsFlags& f) {
  const hc::ArmFamily fam = family_of(f.inst);
  const auto& in = f.inst;
  struct Row {
    std::string name;
    std::optional<hc::BoundReport> report;
    std::string error;
  };
  std::vector<Row> rows;
  auto attempt = [&rows](std::string name, auto fn) {
    try {
      rows.push_back({std::move(name), fn(), {}});
    } catch (const hc::PreconditionError& e) {
      rows.push_back({std::move(name), std::nullopt, e.what()});
    }
  };
  attempt("lb_adaptive_known",
          [&] { return hc::lb_adaptive_known(in.alpha, in.delta, fam, in.theta0, in.theta1); });
  if (f.m) {
    attempt("lb_fixed_known", [&] {
      return hc::lb_fixed_known(in.alpha, in.delta, fam, in.theta0, in.theta1, *f.m);
    });
    if (fam.kind() == hc::FamilyKind::Bernoulli) {
      attempt("lb_fixed_unknown",
              [&] { return hc::lb_fixed_unknown(in.alpha, in.delta, in.theta0, in.theta1, *f.m); });
    }
  }
  for (auto row : {hc::Table1Row::FixedKnown, hc::Table1Row::AdaptiveKnown,
                   hc::Table1Row::UnknownThetas, hc::Table1Row::UnknownAlpha,
                   hc::Table1Row::UnknownAll}) {
    attempt("ub_table1:" + std::string(hc::to_string(row)),
            [&] { return hc::ub_table1(row, in.alpha, in.delta, in.theta0, in.theta1); });
  }

  if (f.as_json) {
    json out = json::array();
    for (const auto& r : rows) {
      json j = r.report ? report_json(*r.report) : json{{"error", r.error}};
      j["name"] = r.name;
      out.push_back(j);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::printf("%-30s %-6s %-20s %-14s %s\n", "bound", "kind", "value", "constant_known", "notes");
  for (const auto& r : rows) {
    if (!r.report) {
      std::printf("%-30s %-6s %-20s %-14s %s\n", r.name.c_str(), "-", "n/a", "-", r.error.c_str());
      continue;
    }
    std::string notes;
    for (const auto& n : r.report->notes) notes += (notes.empty() ? "" : "; ") + n;
    const std::string value = std::isinf(r.report->value) ? "infinite" : fmt(r.report->value);
    std::printf("%-30s %-6s %-20s %-14s %s\n", r.name.c_str(),
                std::string(hc::to_string(r.report->kind)).c_str(), value.c_str(),
                r.report->constant_known ? "true" : "false", notes.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------- divergence

struct DivergenceFlags {
  InstanceFlags inst;
  std::uint64_t m = 1;
};

int run_divergence(const DivergenceFlags& f) {
  const hc::ArmFamily fam = family_of(f.inst);
  const auto& in = f.inst;
  json j;
  j["family"] = fam.name();
  j["theta0"] = in.theta0;
  j["theta1"] = in.theta1;
  j["m"] = f.m;
  j["kl_01"] = real(hc::kl(fam, in.theta0, in.theta1));
  j["kl_10"] = real(hc::kl(fam, in.theta1, in.theta0));
  j["chi2_10"] = real(hc::chi2(fam, in.theta1, in.theta0));
  j["chi2_product_10"] = real(hc::chi2_product(fam, in.theta1, in.theta0, f.m));
  if (in.alpha > 0.0 && fam.kind() != hc::FamilyKind::BoundedBeta) {
    const hc::MixtureSpec spec = hc::MixtureSpec::make(in.alpha, in.theta0, in.theta1, fam);
    j["alpha"] = in.alpha;
    j["chi2_mixture_vs_theta0"] = real(hc::chi2_mixture_vs_single(spec, f.m, in.theta0));
    try {
      const hc::Theorem3Constants c = hc::theorem3_constants(spec, f.m);
      j["theta_star"] = real(c.theta_star);
      j["chi2_mixture_vs_theta_star"] = real(hc::chi2_mixture_vs_single(spec, f.m, c.theta_star));
      j["theorem_constants"] = {{"theta_minus", real(c.theta_minus)},
                                {"theta_plus", real(c.theta_plus)},
                                {"kappa", real(c.kappa)},
                                {"gamma", real(c.gamma_envelope)},
                                {"c", real(c.c)},
                                {"chi2_bound", real(c.chi2_bound)}};
    } catch (const hc::PreconditionError& e) {
      j["theorem_constants"] = {{"error", e.what()}};
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- detect

struct DetectFlags {
  InstanceFlags inst;
  std::string samples;
  std::string simulate;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
};

json plan_json(const hc::GaussianTestPlan& p) {
  return {{"theta0", p.theta0}, {"theta1", p.theta1},   {"sigma", p.sigma},
          {"alpha", p.alpha},   {"delta", p.delta},     {"gamma", p.gamma},
          {"p0", p.p0},         {"p1", p.p1},           {"epsilon_gap", p.epsilon_gap},
          {"n", p.n},           {"error_bound", p.error_bound}};
}

std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read samples from " + path);
  std::vector<double> xs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(line, &used));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  return xs;
}

int run_detect(const DetectFlags& f) {
  const auto& in = f.inst;
  const hc::GaussianTestPlan plan =
      hc::plan_gaussian_test(in.theta0, in.theta1, in.scale, in.alpha, in.delta);
  json j;
  j["plan"] = plan_json(plan);
  if (!f.samples.empty()) {
    const std::vector<double> xs = read_samples(f.samples);
    if (xs.empty() || xs.size() % plan.n != 0) {
      throw hc::PreconditionError("sample count " + std::to_string(xs.size()) +
                                  " is not a positive multiple of n = " + std::to_string(plan.n));
    }
    json decisions = json::array();
    for (std::size_t off = 0; off < xs.size(); off += plan.n) {
      const auto d = hc::run_gaussian_test(plan, std::span<const double>(xs).subspan(off, plan.n));
      decisions.push_back(hc::to_string(d));
    }
    if (decisions.size() == 1) {
      j["decision"] = decisions[0];
    } else {
      j["decisions"] = decisions;
    }
  }
  if (!f.simulate.empty()) {
    const auto truth = hc::parse_hypothesis(f.simulate);
    const auto est = hc::simulate_gaussian_test(plan, truth, f.trials, f.seed);
    j["simulation"] = {{"truth", f.simulate}, {"trials", est.trials},   {"errors", est.errors},
                       {"error_rate", est.rate}, {"ci_radius", est.ci_radius}};
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- probe-lemma

struct ProbeFlags {
  double slope = 0.5;
  double offset = 20.0;
  std::string walk = "rademacher";
  std::optional<std::uint64_t> horizon;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
};

int run_probe(const ProbeFlags& f) {
  const std::uint64_t horizon = f.horizon.value_or(hc::default_lemma_horizon(f.slope, f.offset));
  const auto r =
      hc::probe_lemma1(f.slope, f.offset, hc::parse_walk(f.walk), horizon, f.trials, f.seed);
  json j = {{"slope", f.slope},         {"offset", f.offset},     {"walk", f.walk},
            {"horizon", r.horizon},     {"trials", r.trials},     {"crossings", r.crossings},
            {"estimate", r.estimate},   {"ci_radius", r.ci_radius}, {"bound", r.bound},
            {"within_bound", r.estimate <= r.bound + 3.0 * r.ci_radius}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-coin search simulator and bound calculator"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo trials of one strategy");
  add_instance_flags(simulate, sim.inst);
  simulate->add_option("--strategy", sim.strategy,
                       "fixed-sample, adaptive-sprt, doubling-epsilon, doubling-alpha, "
                       "fully-adaptive")->capture_default_str();
  simulate->add_option("--trials", sim.trials)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--max-samples", sim.max_samples)->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads, 0 = all cores");
  simulate->add_option("--out", sim.out, "CSV path (default stdout)");
  simulate->add_option("--trace", sim.trace, "Write trial 0's event trace as JSON lines");
  simulate->add_option("--config", sim.config, "JSON experiment config; flags override it");
  simulate->add_option("--alpha0", sim.alpha0, "Assumed alpha");
  simulate->add_option("--epsilon0", sim.epsilon0, "Assumed gap");
  simulate->add_option("--assumed-theta0", sim.assumed_theta0);
  simulate->add_option("--assumed-theta1", sim.assumed_theta1);
  simulate->add_option("--heavy-probability", sim.heavy_probability,
                       "Override the label draw probability");

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "Grid of (alpha, epsilon, strategy) batches");
  sweep->add_option("--alpha", sw.alphas, "Alpha values")->delimiter(',')->capture_default_str();
  auto* eps_opt =
      sweep->add_option("--epsilon", sw.epsilons, "Gap values")->delimiter(',')->capture_default_str();
  sweep->add_option("--inverse-budget", sw.inverse_budgets,
                    "Values of 1/(alpha eps^2); replaces --epsilon")
      ->delimiter(',')
      ->excludes(eps_opt);
  sweep->add_option("--strategy", sw.strategies)->delimiter(',')->capture_default_str();
  sweep->add_option("--family", sw.family)->capture_default_str();
  sweep->add_option("--sigma,--concentration", sw.scale)->capture_default_str();
  sweep->add_option("--center", sw.center, "Midpoint of theta0 and theta1")->capture_default_str();
  sweep->add_option("--delta", sw.delta)->capture_default_str();
  sweep->add_option("--trials", sw.trials)->capture_default_str();
  sweep->add_option("--seed", sw.seed)->capture_default_str();
  sweep->add_option("--max-samples", sw.max_samples)->capture_default_str();
  sweep->add_option("--threads", sw.threads);
  sweep->add_option("--out", sw.out, "CSV path (default stdout)");

  BoundsFlags bf;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the lower and upper bounds");
  add_instance_flags(bounds, bf.inst);
  bounds->add_option("--m", bf.m, "Per-arm sample count for the fixed-sample bounds");
  bounds->add_flag("--json", bf.as_json, "JSON output");

  DivergenceFlags df;
  auto* divergence = app.add_subcommand("divergence", "KL and chi^2 divergences");
  add_instance_flags(divergence, df.inst);
  divergence->add_option("--m", df.m)->capture_default_str();

  DetectFlags det;
  auto* detect = app.add_subcommand("detect", "Gaussian mixture detection test");
  add_instance_flags(detect, det.inst);
  detect->add_option("--samples", det.samples, "File with one sample per line");
  detect->add_option("--simulate", det.simulate, "H0 or H1: Monte Carlo error rate");
  detect->add_option("--trials", det.trials)->capture_default_str();
  detect->add_option("--seed", det.seed)->capture_default_str();

  ProbeFlags pf;
  auto* probe = app.add_subcommand("probe-lemma", "Random-walk line-crossing probe");
  probe->add_option("--alpha,--slope", pf.slope)->capture_default_str();
  probe->add_option("--beta,--offset", pf.offset)->capture_default_str();
  probe->add_option("--walk", pf.walk, "rademacher, uniform or zero")->capture_default_str();
  probe->add_option("--horizon", pf.horizon, "Default ceil(16 beta / alpha)");
  probe->add_option("--trials", pf.trials)->capture_default_str();
  probe->add_option("--seed", pf.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate) return run_simulate(sim, simulate);
    if (*sweep) return run_sweep(sw);
    if (*bounds) return run_bounds(bf);
    if (*divergence) return run_divergence(df);
    if (*detect) return run_detect(det);
    if (*probe) return run_probe(pf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
