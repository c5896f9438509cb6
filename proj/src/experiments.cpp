#include "dpboot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "dpboot/errors.hpp"
#include "dpboot/gdp.hpp"
#include "dpboot/normal.hpp"

namespace dpboot {

namespace {

constexpr double kTruncLower = -5.0;
constexpr double kTruncUpper = 5.0;
constexpr std::uint64_t kPoolStream = 0x706f6f6cULL;

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shared tail of the ingestion pipeline: min/max scaling of both columns,
// covariate (1/sqrt2, income/sqrt2), label +1 iff shelter cost >= 0.5.
Sample assemble_regression_sample(const std::vector<double>& income,
                                  const std::vector<double>& shelter) {
  if (income.empty()) throw IngestError("regression ingest: no usable rows");
  auto [inc_lo, inc_hi] = std::minmax_element(income.begin(), income.end());
  auto [she_lo, she_hi] = std::minmax_element(shelter.begin(), shelter.end());
  if (*inc_hi == *inc_lo || *she_hi == *she_lo) {
    throw IngestError("regression ingest: a column is constant, cannot scale to [0,1]");
  }
  const double root_half = 1.0 / std::sqrt(2.0);
  Sample out;
  out.dim = 2;
  out.features.reserve(2 * income.size());
  out.labels.reserve(income.size());
  for (std::size_t i = 0; i < income.size(); ++i) {
    double v = (income[i] - *inc_lo) / (*inc_hi - *inc_lo);
    double y = (shelter[i] - *she_lo) / (*she_hi - *she_lo);
    out.features.push_back(root_half);
    out.features.push_back(v * root_half);
    out.labels.push_back(y >= 0.5 ? 1 : -1);
  }
  return out;
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kTruncatedNormalMean: return "truncated_normal_mean";
    case Scenario::kLogisticCensus: return "logistic_census";
    case Scenario::kLogisticSynthetic17d: return "logistic_synthetic_17d";
  }
  throw ParameterError("unknown scenario");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kMOutOfN: return "m_out_of_n";
    case Method::kNOutOfN: return "n_out_of_n";
    case Method::kBlbquant: return "blbquant";
  }
  throw ParameterError("unknown method");
}

std::string to_string(DeltaLaw law) {
  return law == DeltaLaw::kOneOverN ? "1/n" : "1/n^2";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "truncated_normal_mean") return Scenario::kTruncatedNormalMean;
  if (name == "logistic_census") return Scenario::kLogisticCensus;
  if (name == "logistic_synthetic_17d") return Scenario::kLogisticSynthetic17d;
  throw ParameterError("unknown scenario: " + name);
}

Method method_from_string(const std::string& name) {
  if (name == "m_out_of_n") return Method::kMOutOfN;
  if (name == "n_out_of_n") return Method::kNOutOfN;
  if (name == "blbquant") return Method::kBlbquant;
  throw ParameterError("unknown method: " + name);
}

DeltaLaw delta_law_from_string(const std::string& name) {
  if (name == "1/n") return DeltaLaw::kOneOverN;
  if (name == "1/n^2") return DeltaLaw::kOneOverNSquared;
  throw ParameterError("unknown delta law: " + name + " (expected 1/n or 1/n^2)");
}

void ExperimentConfig::validate() const {
  if (n_values.empty() || B_values.empty() || mu_values.empty()) {
    throw ParameterError("experiment config: the (n, B, mu) grid must be nonempty");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw ParameterError("experiment config: alpha must lie in (0, 0.5)");
  }
  if (replications < 1) throw ParameterError("experiment config: replications must be >= 1");
  if (threads < 1) throw ParameterError("experiment config: threads must be >= 1");
  if (pool_size < 2) throw ParameterError("experiment config: pool_size must be >= 2");
  for (auto n : n_values) {
    if (n < 2 || n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
      throw ParameterError("experiment config: n out of range");
    }
  }
  for (auto B : B_values) {
    if (B < 0) throw ParameterError("experiment config: B must be >= 0");
    if (B == 0 && method != Method::kNOutOfN) {
      throw ParameterError("experiment config: B = 0 (rule of thumb) only applies to n_out_of_n");
    }
  }
  for (auto mu : mu_values) {
    if (!(mu > 0.0)) throw ParameterError("experiment config: mu must be positive");
  }
}

int rule_of_thumb_B(std::size_t n, double mu) {
  auto b = static_cast<long>(std::lround(mu * mu * static_cast<double>(n)));
  return static_cast<int>(std::max(2L, b));
}

Sample ingest_regression_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path + ": empty file, expected header mrkinc,shelco");
  std::string header = trimmed(line);
  std::transform(header.begin(), header.end(), header.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (header != "mrkinc,shelco") {
    throw IngestError(path + ": expected header mrkinc,shelco, found \"" + trimmed(line) + "\"");
  }
  std::vector<double> income;
  std::vector<double> shelter;
  std::size_t total = 0;
  std::size_t dropped = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    ++total;
    auto comma = line.find(',');
    std::string a = trimmed(comma == std::string::npos ? line : line.substr(0, comma));
    std::string b = comma == std::string::npos ? "" : trimmed(line.substr(comma + 1));
    if (a.empty() || b.empty()) {
      ++dropped;
      continue;
    }
    double va, vb;
    std::size_t pa = 0, pb = 0;
    try {
      va = std::stod(a, &pa);
      vb = std::stod(b, &pb);
    } catch (const std::exception&) {
      throw IngestError(path + ": non-numeric cell at line " + std::to_string(lineno));
    }
    if (pa != a.size() || pb != b.size()) {
      throw IngestError(path + ": non-numeric cell at line " + std::to_string(lineno));
    }
    income.push_back(va);
    shelter.push_back(vb);
  }
  if (income.empty()) {
    throw IngestError(path + ": no usable rows (" + std::to_string(dropped) + " of " +
                      std::to_string(total) + " dropped)");
  }
  if (dropped > 0) {
    std::fprintf(stderr, "ingest %s: dropped %zu of %zu rows, %zu remain\n", path.c_str(),
                 dropped, total, income.size());
  }
  return assemble_regression_sample(income, shelter);
}

Sample synthesize_census_surrogate(std::size_t n, Rng& rng) {
  if (n < 2) throw ParameterError("census surrogate: n must be >= 2");
  std::vector<double> income(n);
  std::vector<double> shelter(n);
  const double rho = 0.5;
  const double resid = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    double z1 = rng.normal();
    double z2 = rho * z1 + resid * rng.normal();
    income[i] = normal_cdf(z1);
    shelter[i] = normal_cdf(z2);
  }
  return assemble_regression_sample(income, shelter);
}

std::vector<double> reference_minimizer(const Sample& data) {
  FitOptions options;
  options.tolerance = 1e-10;
  return fit_regularized_logistic(data, options);
}

namespace {

Sample resample_pool(const Sample& pool, std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::size_t pool_n = pool.size();
  for (std::size_t i = 0; i < n; ++i) idx[i] = rng.uniform_below(pool_n);
  return pool.subset(idx);
}

struct ReplicationResult {
  ConfidenceInterval interval;
  double seconds = 0.0;
};

ReplicationResult run_one(const ExperimentConfig& config, const Sample* pool,
                          const EstimatorSpec& estimator, std::size_t n, int B, double mu,
                          Rng& rng) {
  Sample data = config.scenario == Scenario::kTruncatedNormalMean
                    ? sample_truncated_normal(n, kTruncLower, kTruncUpper, rng)
                    : resample_pool(*pool, n, rng);
  auto start = std::chrono::steady_clock::now();
  ReplicationResult out;
  if (config.method == Method::kBlbquant) {
    BLBConfig blb;
    blb.delta = config.delta_law == DeltaLaw::kOneOverN
                    ? 1.0 / static_cast<double>(n)
                    : 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    blb.epsilon = solve_epsilon(mu, blb.delta);
    blb.B = B;
    blb.alpha = 2.0 * config.alpha;
    blb.zero_noise = config.zero_noise;
    out.interval = blbquant_ci(data, estimator, blb, rng).interval;
  } else {
    BootstrapConfig boot;
    boot.m = config.method == Method::kMOutOfN ? choose_m(static_cast<int>(n), B)
                                               : static_cast<int>(n);
    boot.B = B;
    boot.budget.mu = mu / std::sqrt(2.0);
    boot.zero_noise = config.zero_noise;
    BootstrapDraws draws = gdp_m_out_of_n_bootstrap(data, estimator, boot, rng);
    out.interval = bootstrap_ci(draws, n, config.alpha);
  }
  auto stop = std::chrono::steady_clock::now();
  out.seconds = std::chrono::duration<double>(stop - start).count();
  return out;
}

}  // namespace

std::vector<ReportRow> run_coverage_study(const ExperimentConfig& config) {
  config.validate();

  EstimatorSpec estimator;
  std::vector<double> truth;
  Sample pool;
  Rng pool_rng = Rng::derive(config.seed, {kPoolStream});
  switch (config.scenario) {
    case Scenario::kTruncatedNormalMean:
      estimator = bounded_mean_estimator(kTruncLower, kTruncUpper);
      truth = {0.0};
      break;
    case Scenario::kLogisticCensus:
      pool = config.data_path.empty()
                 ? synthesize_census_surrogate(config.pool_size, pool_rng)
                 : ingest_regression_csv(config.data_path);
      estimator = regularized_logistic_estimator(2);
      truth = reference_minimizer(pool);
      break;
    case Scenario::kLogisticSynthetic17d:
      pool = synthesize_logistic_17d(config.pool_size, pool_rng);
      estimator = regularized_logistic_estimator(17);
      truth = reference_minimizer(pool);
      break;
  }

  std::vector<ReportRow> rows;
  std::size_t grid_index = 0;
  const auto R = static_cast<std::size_t>(config.replications);
  for (auto n : config.n_values) {
    for (auto B_raw : config.B_values) {
      for (auto mu : config.mu_values) {
        int B = B_raw == 0 ? rule_of_thumb_B(n, mu) : B_raw;
        std::vector<ReplicationResult> results(R);
        auto worker_count =
            static_cast<std::size_t>(std::min<long>(config.threads, static_cast<long>(R)));
        if (worker_count <= 1) {
          for (std::size_t rep = 0; rep < R; ++rep) {
            Rng rng = Rng::derive(config.seed, {grid_index, rep});
            results[rep] = run_one(config, &pool, estimator, n, B, mu, rng);
          }
        } else {
          std::atomic<std::size_t> next{0};
          std::vector<std::thread> workers;
          workers.reserve(worker_count);
          for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
              for (std::size_t rep = next.fetch_add(1); rep < R; rep = next.fetch_add(1)) {
                Rng rng = Rng::derive(config.seed, {grid_index, rep});
                results[rep] = run_one(config, &pool, estimator, n, B, mu, rng);
              }
            });
          }
          for (auto& t : workers) t.join();
        }

        std::size_t d = estimator.dimension;
        std::vector<std::size_t> hits(d, 0);
        std::vector<double> length_sum(d, 0.0);
        double time_sum = 0.0;
        for (const auto& res : results) {
          time_sum += res.seconds;
          for (std::size_t c = 0; c < d; ++c) {
            if (res.interval.lower[c] <= truth[c] && truth[c] <= res.interval.upper[c]) {
              ++hits[c];
            }
            length_sum[c] += res.interval.upper[c] - res.interval.lower[c];
          }
        }
        for (std::size_t c = 0; c < d; ++c) {
          ReportRow row;
          row.scenario = to_string(config.scenario);
          row.method = to_string(config.method);
          row.n = n;
          row.m = config.method == Method::kMOutOfN ? choose_m(static_cast<int>(n), B)
                 : config.method == Method::kNOutOfN ? static_cast<int>(n)
                                                     : 0;
          row.B = B;
          row.mu = mu;
          row.alpha = config.alpha;
          row.coord = static_cast<int>(c);
          row.coverage = static_cast<double>(hits[c]) / static_cast<double>(R);
          row.avg_length = length_sum[c] / static_cast<double>(R);
          row.avg_time_sec = time_sum / static_cast<double>(R);
          row.replications = config.replications;
          row.seed = config.seed;
          rows.push_back(row);
        }
        ++grid_index;
      }
    }
  }
  return rows;
}

namespace {

std::string format_length(double value) {
  char buf[64];
  if (std::isfinite(value) && std::abs(value) < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.6e", value);
  } else {
    std::snprintf(buf, sizeof(buf), "%.6g", value);
  }
  return buf;
}

std::string format_coverage(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

}  // namespace

void emit_report(const std::vector<ReportRow>& rows, const std::string& path,
                 ReportFormat format) {
  if (rows.empty()) throw ParameterError("emit_report: no rows");
  std::ofstream out(path);
  if (!out) throw DataError("emit_report: cannot open " + path + " for writing");
  if (format == ReportFormat::kCsv) {
    out << "scenario,method,n,m,B,mu,alpha,coord,coverage,avg_length,avg_time_sec,"
           "replications,seed\n";
    for (const auto& r : rows) {
      char mid[160];
      std::snprintf(mid, sizeof(mid), "%g,%g", r.mu, r.alpha);
      char time_buf[32];
      std::snprintf(time_buf, sizeof(time_buf), "%.6g", r.avg_time_sec);
      out << r.scenario << ',' << r.method << ',' << r.n << ',' << r.m << ',' << r.B << ','
          << mid << ',' << r.coord << ',' << format_coverage(r.coverage) << ','
          << format_length(r.avg_length) << ',' << time_buf << ','
          << r.replications << ',' << r.seed << '\n';
    }
  } else {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : rows) {
      doc.push_back({{"scenario", r.scenario},
                     {"method", r.method},
                     {"n", r.n},
                     {"m", r.m},
                     {"B", r.B},
                     {"mu", r.mu},
                     {"alpha", r.alpha},
                     {"coord", r.coord},
                     {"coverage", r.coverage},
                     {"avg_length", r.avg_length},
                     {"avg_time_sec", r.avg_time_sec},
                     {"replications", r.replications},
                     {"seed", r.seed}});
    }
    out << doc.dump(2) << '\n';
  }
  if (!out) throw DataError("emit_report: write to " + path + " failed");
}

}  // namespace dpboot
