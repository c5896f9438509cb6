#include "dpboot/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "dpboot/errors.hpp"

namespace dpboot {
namespace {

namespace fs = std::filesystem;

std::string write_temp(const std::string& name, const std::string& content) {
  fs::path path = fs::path(testing::TempDir()) / name;
  std::ofstream out(path);
  out << content;
  out.close();
  return path.string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

TEST(Names, RoundTripAndRejectUnknown) {
  for (Scenario s : {Scenario::kTruncatedNormalMean, Scenario::kLogisticCensus,
                     Scenario::kLogisticSynthetic17d}) {
    EXPECT_EQ(scenario_from_string(to_string(s)), s);
  }
  for (Method m : {Method::kMOutOfN, Method::kNOutOfN, Method::kBlbquant}) {
    EXPECT_EQ(method_from_string(to_string(m)), m);
  }
  for (DeltaLaw law : {DeltaLaw::kOneOverN, DeltaLaw::kOneOverNSquared}) {
    EXPECT_EQ(delta_law_from_string(to_string(law)), law);
  }
  EXPECT_THROW(scenario_from_string("gaussian"), ParameterError);
  EXPECT_THROW(method_from_string("bootstrap"), ParameterError);
  EXPECT_THROW(delta_law_from_string("1/sqrt(n)"), ParameterError);
}

TEST(RuleOfThumb, RoundsMuSquaredN) {
  EXPECT_EQ(rule_of_thumb_B(1000, 0.5), 250);
  EXPECT_EQ(rule_of_thumb_B(500, 0.5), 125);
  EXPECT_EQ(rule_of_thumb_B(5000, 0.2), 200);
  EXPECT_EQ(rule_of_thumb_B(100, 0.1), 2);
}

TEST(ConfigValidation, CatchesBadGrids) {
  ExperimentConfig config;
  config.n_values = {1000};
  config.B_values = {100};
  config.mu_values = {0.5};
  EXPECT_NO_THROW(config.validate());

  ExperimentConfig empty = config;
  empty.n_values.clear();
  EXPECT_THROW(empty.validate(), ParameterError);

  ExperimentConfig bad_alpha = config;
  bad_alpha.alpha = 0.5;
  EXPECT_THROW(bad_alpha.validate(), ParameterError);

  ExperimentConfig bad_rep = config;
  bad_rep.replications = 0;
  EXPECT_THROW(bad_rep.validate(), ParameterError);

  ExperimentConfig bad_n = config;
  bad_n.n_values = {1};
  EXPECT_THROW(bad_n.validate(), ParameterError);

  ExperimentConfig bad_mu = config;
  bad_mu.mu_values = {0.0};
  EXPECT_THROW(bad_mu.validate(), ParameterError);

  ExperimentConfig rule_b = config;
  rule_b.B_values = {0};
  EXPECT_THROW(rule_b.validate(), ParameterError);  // only n_out_of_n takes 0
  rule_b.method = Method::kNOutOfN;
  EXPECT_NO_THROW(rule_b.validate());

  ExperimentConfig bad_threads = config;
  bad_threads.threads = 0;
  EXPECT_THROW(bad_threads.validate(), ParameterError);

  ExperimentConfig bad_pool = config;
  bad_pool.pool_size = 1;
  EXPECT_THROW(bad_pool.validate(), ParameterError);
}

TEST(Ingest, ScalesObservedRangeToUnitInterval) {
  std::string path = write_temp("two_rows.csv", "mrkinc,shelco\n10,100\n20,300\n");
  Sample s = ingest_regression_csv(path);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.dim, 2u);
  double root_half = 1.0 / std::sqrt(2.0);
  EXPECT_DOUBLE_EQ(s.record(0)[0], root_half);
  EXPECT_DOUBLE_EQ(s.record(0)[1], 0.0);
  EXPECT_DOUBLE_EQ(s.record(1)[1], root_half);
  EXPECT_EQ(s.labels[0], -1);
  EXPECT_EQ(s.labels[1], 1);
}

TEST(Ingest, BoundaryShelterCountsAsPositive) {
  std::string path = write_temp("boundary.csv", "MRKINC,SHELCO\n0,0\n1,0.5\n2,1\n");
  Sample s = ingest_regression_csv(path);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.labels[0], -1);
  EXPECT_EQ(s.labels[1], 1);
  EXPECT_EQ(s.labels[2], 1);
}

TEST(Ingest, DropsRowsWithEmptyCells) {
  std::string path = write_temp("holes.csv", "mrkinc,shelco\n1,2\n,3\n4,\n5,6\n");
  Sample s = ingest_regression_csv(path);
  EXPECT_EQ(s.size(), 2u);
}

TEST(Ingest, ErrorsCarryContext) {
  EXPECT_THROW(ingest_regression_csv("/nonexistent/file.csv"), IngestError);
  std::string bad_header = write_temp("hdr.csv", "income,shelter\n1,2\n");
  EXPECT_THROW(ingest_regression_csv(bad_header), IngestError);
  std::string bad_cell = write_temp("cell.csv", "mrkinc,shelco\n1,2\n3,abc\n");
  try {
    ingest_regression_csv(bad_cell);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::string all_dropped = write_temp("dropped.csv", "mrkinc,shelco\n,1\n2,\n");
  EXPECT_THROW(ingest_regression_csv(all_dropped), IngestError);
  std::string constant = write_temp("const.csv", "mrkinc,shelco\n1,2\n1,3\n");
  EXPECT_THROW(ingest_regression_csv(constant), IngestError);
}

TEST(CensusSurrogate, ShapeAndDependence) {
  Rng rng(5);
  Sample s = synthesize_census_surrogate(5000, rng);
  EXPECT_EQ(s.dim, 2u);
  EXPECT_EQ(s.size(), 5000u);
  double root_half = 1.0 / std::sqrt(2.0);
  double income_pos = 0.0, income_neg = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(s.record(i)[0], root_half);
    EXPECT_GE(s.record(i)[1], 0.0);
    EXPECT_LE(s.record(i)[1], root_half);
    if (s.labels[i] == 1) {
      income_pos += s.record(i)[1];
      ++pos;
    } else {
      income_neg += s.record(i)[1];
      ++neg;
    }
  }
  ASSERT_GT(pos, 100u);
  ASSERT_GT(neg, 100u);
  // The copula ties income to shelter cost, so positives earn more.
  EXPECT_GT(income_pos / static_cast<double>(pos), income_neg / static_cast<double>(neg));

  Rng again(5);
  Sample t = synthesize_census_surrogate(5000, again);
  EXPECT_EQ(s.features, t.features);
}

TEST(ReferenceMinimizer, SymmetricAndDeterministic) {
  Sample s;
  s.dim = 2;
  s.features = {0.5, 0.5, 0.5, 0.5};
  s.labels = {1, -1};
  std::vector<double> theta = reference_minimizer(s);
  EXPECT_NEAR(theta[0], 0.0, 1e-9);
  EXPECT_NEAR(theta[1], 0.0, 1e-9);
  Rng rng(7);
  Sample t = synthesize_census_surrogate(200, rng);
  EXPECT_EQ(reference_minimizer(t), reference_minimizer(t));
}

TEST(CoverageStudy, ZeroNoiseClassicalBootstrapCovers) {
  ExperimentConfig config;
  config.scenario = Scenario::kTruncatedNormalMean;
  config.method = Method::kNOutOfN;
  config.n_values = {5000};
  config.B_values = {200};
  config.mu_values = {1.0};
  config.alpha = 0.05;
  config.replications = 500;
  config.seed = 2;
  config.zero_noise = true;
  std::vector<ReportRow> rows = run_coverage_study(config);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GE(rows[0].coverage, 0.86);
  EXPECT_LE(rows[0].coverage, 0.94);
  EXPECT_EQ(rows[0].m, 5000);
  EXPECT_EQ(rows[0].replications, 500);
  EXPECT_GT(rows[0].avg_length, 0.0);
  EXPECT_GE(rows[0].avg_time_sec, 0.0);
}

TEST(CoverageStudy, DeterministicModuloTiming) {
  ExperimentConfig config;
  config.scenario = Scenario::kTruncatedNormalMean;
  config.method = Method::kMOutOfN;
  config.n_values = {500, 1000};
  config.B_values = {50};
  config.mu_values = {0.5, 1.0};
  config.replications = 20;
  config.seed = 3;
  std::vector<ReportRow> a = run_coverage_study(config);
  std::vector<ReportRow> b = run_coverage_study(config);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].coverage, b[i].coverage);
    EXPECT_EQ(a[i].avg_length, b[i].avg_length);
    EXPECT_EQ(a[i].m, b[i].m);
    EXPECT_EQ(a[i].B, b[i].B);
    double scaled = a[i].coverage * a[i].replications;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
  }
}

TEST(CoverageStudy, ThreadsDoNotChangeResults) {
  ExperimentConfig config;
  config.scenario = Scenario::kTruncatedNormalMean;
  config.method = Method::kMOutOfN;
  config.n_values = {500};
  config.B_values = {50};
  config.mu_values = {0.5};
  config.replications = 24;
  config.seed = 5;
  std::vector<ReportRow> serial = run_coverage_study(config);
  config.threads = 4;
  std::vector<ReportRow> parallel = run_coverage_study(config);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].coverage, parallel[i].coverage);
    EXPECT_EQ(serial[i].avg_length, parallel[i].avg_length);
  }
}

TEST(CoverageStudy, BlbquantRowsUseZeroM) {
  ExperimentConfig config;
  config.scenario = Scenario::kTruncatedNormalMean;
  config.method = Method::kBlbquant;
  config.n_values = {100};
  config.B_values = {20};
  config.mu_values = {0.5};
  config.alpha = 0.05;
  config.replications = 5;
  config.seed = 7;
  std::vector<ReportRow> rows = run_coverage_study(config);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].method, "blbquant");
  EXPECT_EQ(rows[0].m, 0);
  EXPECT_GE(rows[0].coverage, 0.0);
  EXPECT_LE(rows[0].coverage, 1.0);
}

TEST(CoverageStudy, CensusSurrogatePipeline) {
  ExperimentConfig config;
  config.scenario = Scenario::kLogisticCensus;
  config.method = Method::kMOutOfN;
  config.n_values = {200};
  config.B_values = {50};
  config.mu_values = {1.0};
  config.replications = 3;
  config.seed = 11;
  config.pool_size = 2000;
  std::vector<ReportRow> rows = run_coverage_study(config);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].scenario, "logistic_census");
  EXPECT_EQ(rows[0].coord, 0);
  EXPECT_EQ(rows[1].coord, 1);
  EXPECT_EQ(rows[0].m, choose_m(200, 50));
}

TEST(CoverageStudy, IngestedFileFeedsTheLogisticScenario) {
  std::ostringstream csv;
  csv << "mrkinc,shelco\n";
  Rng rng(13);
  for (int i = 0; i < 400; ++i) {
    csv << rng.uniform01() << ',' << rng.uniform01() << '\n';
  }
  std::string path = write_temp("pool.csv", csv.str());
  ExperimentConfig config;
  config.scenario = Scenario::kLogisticCensus;
  config.method = Method::kMOutOfN;
  config.n_values = {100};
  config.B_values = {25};
  config.mu_values = {1.0};
  config.replications = 2;
  config.seed = 13;
  config.data_path = path;
  std::vector<ReportRow> rows = run_coverage_study(config);
  ASSERT_EQ(rows.size(), 2u);
}

TEST(EmitReport, CsvRoundTripsWithExactHeader) {
  ReportRow row;
  row.scenario = "truncated_normal_mean";
  row.method = "m_out_of_n";
  row.n = 1000;
  row.m = 10;
  row.B = 100;
  row.mu = 0.5;
  row.alpha = 0.05;
  row.coord = 0;
  row.coverage = 0.894;
  row.avg_length = 0.136;
  row.avg_time_sec = 0.004;
  row.replications = 500;
  row.seed = 1;
  fs::path path = fs::path(testing::TempDir()) / "report.csv";
  emit_report({row}, path.string(), ReportFormat::kCsv);

  std::ifstream in(path);
  std::string header, line;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header,
            "scenario,method,n,m,B,mu,alpha,coord,coverage,avg_length,avg_time_sec,"
            "replications,seed");
  ASSERT_TRUE(std::getline(in, line));
  std::vector<std::string> cells = split_csv_line(line);
  ASSERT_EQ(cells.size(), 13u);
  EXPECT_EQ(cells[0], "truncated_normal_mean");
  EXPECT_EQ(cells[1], "m_out_of_n");
  EXPECT_EQ(cells[2], "1000");
  EXPECT_EQ(cells[3], "10");
  EXPECT_EQ(cells[4], "100");
  EXPECT_DOUBLE_EQ(std::stod(cells[5]), 0.5);
  EXPECT_DOUBLE_EQ(std::stod(cells[6]), 0.05);
  EXPECT_EQ(cells[7], "0");
  EXPECT_EQ(cells[8], "0.894");
  EXPECT_NEAR(std::stod(cells[9]), 0.136, 1e-9);
  EXPECT_NEAR(std::stod(cells[10]), 0.004, 1e-9);
  EXPECT_EQ(cells[11], "500");
  EXPECT_EQ(cells[12], "1");
}

TEST(EmitReport, TinyLengthsUseScientificNotation) {
  ReportRow row;
  row.scenario = "logistic_census";
  row.method = "m_out_of_n";
  row.avg_length = 9.75e-5;
  row.coverage = 0.9;
  fs::path path = fs::path(testing::TempDir()) / "tiny.csv";
  emit_report({row}, path.string(), ReportFormat::kCsv);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_NE(line.find("e-05"), std::string::npos);
  std::vector<std::string> cells = split_csv_line(line);
  EXPECT_EQ(cells[8], "0.900");
  EXPECT_NEAR(std::stod(cells[9]), 9.75e-5, 1e-12);
}

TEST(EmitReport, JsonRoundTrips) {
  ReportRow row;
  row.scenario = "truncated_normal_mean";
  row.method = "n_out_of_n";
  row.n = 500;
  row.m = 500;
  row.B = 125;
  row.mu = 0.5;
  row.alpha = 0.05;
  row.coverage = 1.0;
  row.avg_length = 1.64;
  row.avg_time_sec = 0.12;
  row.replications = 500;
  row.seed = 9;
  fs::path path = fs::path(testing::TempDir()) / "report.json";
  emit_report({row}, path.string(), ReportFormat::kJson);
  std::ifstream in(path);
  nlohmann::json doc = nlohmann::json::parse(in);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["scenario"], "truncated_normal_mean");
  EXPECT_EQ(doc[0]["n"], 500);
  EXPECT_EQ(doc[0]["m"], 500);
  EXPECT_DOUBLE_EQ(doc[0]["avg_length"].get<double>(), 1.64);
  EXPECT_DOUBLE_EQ(doc[0]["coverage"].get<double>(), 1.0);
  EXPECT_EQ(doc[0]["seed"], 9);
}

TEST(EmitReport, EmptyRowsLeaveNoFile) {
  fs::path path = fs::path(testing::TempDir()) / "empty_report.csv";
  std::error_code ec;
  fs::remove(path, ec);
  EXPECT_THROW(emit_report({}, path.string(), ReportFormat::kCsv), ParameterError);
  EXPECT_FALSE(fs::exists(path));
}

TEST(EmitReport, UnwritablePathThrows) {
  ReportRow row;
  row.scenario = "x";
  row.method = "y";
  EXPECT_THROW(emit_report({row}, "/nonexistent_dir_zz/report.csv", ReportFormat::kCsv),
               DataError);
}

}  // namespace
}  // namespace dpboot
