#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dpboot/blbquant.hpp"
#include "dpboot/bootstrap.hpp"
#include "dpboot/errors.hpp"
#include "dpboot/experiments.hpp"
#include "dpboot/gdp.hpp"
#include "dpboot/tradeoff_calculus.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": not a number: " + s);
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": not an integer: " + s);
}

// Flat `key = value` settings, one per line, # starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dpboot::IngestError("cannot open config " + path);
  std::map<std::string, std::string> settings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    if (!settings.emplace(key, value).second) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    }
  }
  return settings;
}

dpboot::ExperimentConfig config_from_settings(std::map<std::string, std::string> settings) {
  dpboot::ExperimentConfig config;
  auto take = [&settings](const char* key) -> std::optional<std::string> {
    auto it = settings.find(key);
    if (it == settings.end()) return std::nullopt;
    std::string value = it->second;
    settings.erase(it);
    return value;
  };
  if (auto v = take("scenario")) config.scenario = dpboot::scenario_from_string(*v);
  if (auto v = take("method")) config.method = dpboot::method_from_string(*v);
  if (auto v = take("n")) {
    for (const auto& part : split(*v, ',')) {
      config.n_values.push_back(static_cast<std::size_t>(parse_int(trim(part), "n")));
    }
  }
  if (auto v = take("B")) {
    for (const auto& part : split(*v, ',')) {
      config.B_values.push_back(static_cast<int>(parse_int(trim(part), "B")));
    }
  }
  if (auto v = take("mu")) {
    for (const auto& part : split(*v, ',')) {
      config.mu_values.push_back(parse_double(trim(part), "mu"));
    }
  }
  if (auto v = take("alpha")) config.alpha = parse_double(*v, "alpha");
  if (auto v = take("replications")) config.replications = static_cast<int>(parse_int(*v, "replications"));
  if (auto v = take("seed")) config.seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
  if (auto v = take("data_path")) config.data_path = *v;
  if (auto v = take("delta_law")) config.delta_law = dpboot::delta_law_from_string(*v);
  if (auto v = take("pool_size")) config.pool_size = static_cast<std::size_t>(parse_int(*v, "pool_size"));
  if (auto v = take("zero_noise")) {
    if (*v == "true" || *v == "1") {
      config.zero_noise = true;
    } else if (*v == "false" || *v == "0") {
      config.zero_noise = false;
    } else {
      throw UsageError("zero_noise: expected true or false, got " + *v);
    }
  }
  if (auto v = take("threads")) config.threads = static_cast<int>(parse_int(*v, "threads"));
  if (!settings.empty()) {
    throw UsageError("unknown config key: " + settings.begin()->first);
  }
  return config;
}

// Plain numeric values, one per line, for the mean estimator.
dpboot::Sample read_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dpboot::IngestError("cannot open " + path);
  dpboot::Sample data;
  data.dim = 1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty()) continue;
    try {
      std::size_t pos = 0;
      double v = std::stod(body, &pos);
      if (pos != body.size()) throw std::invalid_argument(body);
      data.features.push_back(v);
    } catch (const std::exception&) {
      throw dpboot::IngestError(path + ": non-numeric value at line " + std::to_string(lineno));
    }
  }
  if (data.features.empty()) throw dpboot::IngestError(path + ": no values");
  return data;
}

struct CiOptions {
  std::string data_path;
  std::string estimator = "mean";
  std::string method = "m_out_of_n";
  std::size_t n = 0;  // 0: use the whole file
  int m = 0;          // 0: choose_m(n, B)
  int B = 500;
  double mu = 1.0;
  double alpha = 0.05;
  double delta = 0.0;  // blbquant; 0: 1/n
  double lower = -5.0;
  double upper = 5.0;
  std::uint64_t seed = 1;
};

int run_ci(const CiOptions& opt) {
  dpboot::Sample data;
  dpboot::EstimatorSpec estimator;
  if (opt.estimator == "mean") {
    data = read_value_file(opt.data_path);
    estimator = dpboot::bounded_mean_estimator(opt.lower, opt.upper);
  } else if (opt.estimator == "logistic") {
    data = dpboot::ingest_regression_csv(opt.data_path);
    estimator = dpboot::regularized_logistic_estimator(2);
  } else {
    throw UsageError("--estimator: expected mean or logistic, got " + opt.estimator);
  }

  dpboot::Rng rng(opt.seed);
  if (opt.n > 0) {
    std::vector<std::size_t> idx(opt.n);
    for (auto& i : idx) i = rng.uniform_below(data.size());
    data = data.subset(idx);
  }
  std::size_t n = data.size();

  dpboot::ConfidenceInterval interval;
  std::vector<double> estimate;
  if (opt.method == "blbquant") {
    dpboot::BLBConfig config;
    config.delta = opt.delta > 0.0 ? opt.delta : 1.0 / static_cast<double>(n);
    config.epsilon = dpboot::solve_epsilon(opt.mu, config.delta);
    config.B = opt.B;
    config.alpha = 2.0 * opt.alpha;
    auto result = dpboot::blbquant_ci(data, estimator, config, rng);
    interval = result.interval;
    estimate = result.theta_bar;
  } else if (opt.method == "m_out_of_n" || opt.method == "n_out_of_n") {
    dpboot::BootstrapConfig config;
    config.B = opt.B;
    config.m = opt.method == "n_out_of_n" ? static_cast<int>(n)
               : opt.m > 0                ? opt.m
                                          : dpboot::choose_m(static_cast<int>(n), opt.B);
    config.budget.mu = opt.mu / std::sqrt(2.0);
    auto draws = dpboot::gdp_m_out_of_n_bootstrap(data, estimator, config, rng);
    interval = dpboot::bootstrap_ci(draws, n, opt.alpha);
    estimate = draws.theta_bar;
  } else {
    throw UsageError("--method: expected m_out_of_n, n_out_of_n or blbquant, got " + opt.method);
  }

  std::printf("coord,estimate,lower,upper\n");
  for (std::size_t c = 0; c < estimate.size(); ++c) {
    std::printf("%zu,%.12g,%.12g,%.12g\n", c, estimate[c], interval.lower[c],
                interval.upper[c]);
  }
  return 0;
}

struct PrivacyOptions {
  std::optional<double> mu;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> B;
};

int run_privacy(const PrivacyOptions& opt) {
  bool printed = false;
  int m = opt.m.value_or(0);
  if (opt.n && opt.B) {
    int chosen = dpboot::choose_m(*opt.n, *opt.B);
    if (!opt.m) {
      m = chosen;
      std::printf("m = %d\n", chosen);
      printed = true;
    }
  }
  if (opt.mu && opt.delta && !opt.epsilon) {
    std::printf("epsilon = %.9g\n", dpboot::solve_epsilon(*opt.mu, *opt.delta));
    printed = true;
  }
  if (opt.epsilon && opt.delta && !opt.mu) {
    std::printf("mu = %.9g\n", dpboot::solve_mu(*opt.epsilon, *opt.delta));
    printed = true;
  }
  if (opt.mu && opt.epsilon && !opt.delta) {
    std::printf("delta = %.9g\n", dpboot::gdp_to_dp_delta(*opt.mu, *opt.epsilon));
    printed = true;
  }
  if (opt.mu && opt.n && opt.B && m > 0) {
    std::printf("mu_star = %.9g\n", dpboot::mu_b_star(m, *opt.n, *opt.B, *opt.mu));
    printed = true;
  }
  if (!printed) {
    throw UsageError(
        "privacy: nothing to compute; give --mu with --delta (epsilon), --epsilon with "
        "--delta (mu), --mu with --epsilon (delta), --n with --B (m), or --mu --m --n --B "
        "(mu_star)");
  }
  return 0;
}

int run_tradeoff(const std::string& curve_spec, const std::string& out_path) {
  auto colon = curve_spec.find(':');
  std::string name = curve_spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : curve_spec.substr(colon + 1);
  dpboot::TradeoffCurve curve = dpboot::TradeoffCurve::identity();
  if (name == "gaussian") {
    if (args.empty()) throw UsageError("--curve gaussian:MU needs a budget");
    curve = dpboot::TradeoffCurve::gaussian(parse_double(args, "--curve gaussian"));
  } else if (name == "bootstrap") {
    auto parts = split(args, ',');
    if (parts.size() != 3) throw UsageError("--curve bootstrap:M,N,MUSTAR needs three values");
    curve = dpboot::bootstrap_privacy_curve(
        static_cast<int>(parse_int(trim(parts[0]), "--curve bootstrap m")),
        static_cast<int>(parse_int(trim(parts[1]), "--curve bootstrap n")),
        parse_double(trim(parts[2]), "--curve bootstrap mu_star"));
  } else {
    throw UsageError("--curve: expected gaussian:MU or bootstrap:M,N,MUSTAR, got " + curve_spec);
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw dpboot::DataError("cannot open " + out_path + " for writing");
    out = &file;
  }
  *out << "alpha,beta\n";
  char buf[64];
  for (double a : dpboot::TradeoffCurve::standard_alphas()) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", a, curve(a));
    *out << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private bootstrap confidence intervals"};
  app.require_subcommand(1);

  CiOptions ci;
  auto* ci_cmd = app.add_subcommand("ci", "Private confidence interval from a dataset file");
  ci_cmd->add_option("data", ci.data_path, "dataset file")->required();
  ci_cmd->add_option("--estimator", ci.estimator, "mean or logistic");
  ci_cmd->add_option("--method", ci.method, "m_out_of_n, n_out_of_n or blbquant");
  ci_cmd->add_option("--n", ci.n, "resample this many rows with replacement first");
  ci_cmd->add_option("--m", ci.m, "resample size (default: choose_m(n, B))");
  ci_cmd->add_option("--B", ci.B, "bootstrap replicates");
  ci_cmd->add_option("--mu", ci.mu, "total GDP budget");
  ci_cmd->add_option("--alpha", ci.alpha, "per-tail level");
  ci_cmd->add_option("--delta", ci.delta, "blbquant relaxation (default 1/n)");
  ci_cmd->add_option("--lower", ci.lower, "mean estimator: data lower bound");
  ci_cmd->add_option("--upper", ci.upper, "mean estimator: data upper bound");
  ci_cmd->add_option("--seed", ci.seed, "rng seed");

  std::string sim_config;
  std::string sim_out;
  std::string sim_format = "csv";
  int sim_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Coverage study driven by a config file");
  sim_cmd->add_option("--config", sim_config, "key = value settings file")->required();
  sim_cmd->add_option("--out", sim_out, "report path (default report.csv / report.json)");
  sim_cmd->add_option("--format", sim_format, "csv or json");
  sim_cmd->add_option("--threads", sim_threads, "cap worker threads (overrides config)");

  PrivacyOptions priv;
  auto* priv_cmd = app.add_subcommand("privacy", "Budget conversions, mu_star and choose_m");
  priv_cmd->add_option("--mu", priv.mu, "GDP budget");
  priv_cmd->add_option("--epsilon", priv.epsilon, "DP epsilon");
  priv_cmd->add_option("--delta", priv.delta, "DP delta");
  priv_cmd->add_option("--m", priv.m, "resample size");
  priv_cmd->add_option("--n", priv.n, "sample size");
  priv_cmd->add_option("--B", priv.B, "bootstrap replicates");

  std::string curve_spec;
  std::string curve_out;
  auto* curve_cmd = app.add_subcommand("tradeoff", "Evaluate a trade-off curve as CSV");
  curve_cmd->add_option("--curve", curve_spec, "gaussian:MU or bootstrap:M,N,MUSTAR")->required();
  curve_cmd->add_option("--out", curve_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ci_cmd->parsed()) return run_ci(ci);
    if (sim_cmd->parsed()) {
      dpboot::ReportFormat format;
      if (sim_format == "csv") {
        format = dpboot::ReportFormat::kCsv;
      } else if (sim_format == "json") {
        format = dpboot::ReportFormat::kJson;
      } else {
        throw UsageError("--format: expected csv or json, got " + sim_format);
      }
      dpboot::ExperimentConfig config = config_from_settings(read_config_file(sim_config));
      if (sim_threads > 0) config.threads = sim_threads;
      std::string out_path =
          sim_out.empty() ? (format == dpboot::ReportFormat::kCsv ? "report.csv" : "report.json")
                          : sim_out;
      auto rows = dpboot::run_coverage_study(config);
      dpboot::emit_report(rows, out_path, format);
      std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
      return 0;
    }
    if (priv_cmd->parsed()) return run_privacy(priv);
    if (curve_cmd->parsed()) return run_tradeoff(curve_spec, curve_out);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
