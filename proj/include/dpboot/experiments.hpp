#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpboot/blbquant.hpp"
#include "dpboot/bootstrap.hpp"
#include "dpboot/estimators.hpp"

namespace dpboot {

enum class Scenario { kTruncatedNormalMean, kLogisticCensus, kLogisticSynthetic17d };
enum class Method { kMOutOfN, kNOutOfN, kBlbquant };

// Law tying the DP relaxation to the sample size in the blbquant rows.
enum class DeltaLaw { kOneOverN, kOneOverNSquared };

std::string to_string(Scenario scenario);
std::string to_string(Method method);
std::string to_string(DeltaLaw law);
Scenario scenario_from_string(const std::string& name);
Method method_from_string(const std::string& name);
DeltaLaw delta_law_from_string(const std::string& name);

struct ExperimentConfig {
  Scenario scenario = Scenario::kTruncatedNormalMean;
  Method method = Method::kMOutOfN;
  std::vector<std::size_t> n_values;
  std::vector<int> B_values;        // 0 is allowed for n_out_of_n: B = round(mu^2 n)
  std::vector<double> mu_values;
  double alpha = 0.05;              // per tail; intervals target level 1 - 2 alpha
  int replications = 500;
  std::uint64_t seed = 1;
  std::string data_path;            // census scenario; empty uses the surrogate pool
  DeltaLaw delta_law = DeltaLaw::kOneOverN;
  std::size_t pool_size = 1000000;  // reference pool for the regression scenarios
  bool zero_noise = false;
  int threads = 1;

  void validate() const;
};

// One output table row per (n, B, mu) grid point and coordinate. m is the
// resample size actually used: choose_m(n, B) for m_out_of_n, n for
// n_out_of_n, and 0 for blbquant which has no resample-size analogue.
struct ReportRow {
  std::string scenario;
  std::string method;
  std::size_t n = 0;
  int m = 0;
  int B = 0;
  double mu = 0.0;
  double alpha = 0.0;
  int coord = 0;
  double coverage = 0.0;
  double avg_length = 0.0;
  double avg_time_sec = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
};

// Replicate budget for the full bootstrap, round(mu^2 n), at least 2.
int rule_of_thumb_B(std::size_t n, double mu);

// Two-column CSV with header `mrkinc,shelco`. Rows with an empty cell are
// dropped (count reported on stderr), non-numeric cells are an error. Both
// columns are scaled to [0,1] by their observed min and max; the covariate
// becomes (1/sqrt2, income/sqrt2) and the label +1 iff shelter cost >= 0.5.
Sample ingest_regression_csv(const std::string& path);

// Stand-in for the census file: two dependent uniform [0,1] variables from a
// Gaussian copula with correlation 0.5, run through the same scaling and
// labeling as the file path.
Sample synthesize_census_surrogate(std::size_t n, Rng& rng);

// Full-dataset logistic fit at tolerance 1e-10, the truth coverage is
// scored against in the regression scenarios.
std::vector<double> reference_minimizer(const Sample& data);

std::vector<ReportRow> run_coverage_study(const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJson };

void emit_report(const std::vector<ReportRow>& rows, const std::string& path,
                 ReportFormat format);

}  // namespace dpboot
