#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "evidenza/bench.hpp"
#include "evidenza/error.hpp"
#include "evidenza/report.hpp"

namespace evidenza {
namespace {

ExperimentConfig small_config(const std::string& model, const std::string& estimator) {
  ExperimentConfig c;
  c.model_id = model;
  c.estimator_id = estimator;
  c.m = 200;
  c.n = 10;
  c.replicates = 8;
  c.seed = 99;
  c.threads = 1;
  return c;
}

TEST(Statistics, RmseAndMape) {
  EXPECT_NEAR(rmse_of({1.0, 3.0}, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(mape_of({1.0, 3.0}, 2.0), 0.5, 1e-15);
  EXPECT_NEAR(rmse_of({2.0, 2.0}, 2.0), 0.0, 0.0);
}

TEST(Replicate, SingleReplicateRmseIsAbsoluteError) {
  auto c = small_config("gaussgauss", "qis");
  c.replicates = 1;
  const auto report = replicate(c);
  ASSERT_EQ(report.values.size(), 1u);
  const double truth = std::exp(*report.log_truth);
  EXPECT_NEAR(*report.rmse, std::abs(report.values[0].linear() - truth), 1e-15);
  EXPECT_NEAR(*report.mape, std::abs(report.values[0].linear() - truth) / truth, 1e-14);
}

TEST(Replicate, ParallelMatchesSerial) {
  for (const char* est : {"naive", "qis", "nested-trapezoid", "vertical"}) {
    auto serial = small_config("gaussgauss", est);
    serial.levels = 20;
    serial.per_level = 10;
    auto parallel = serial;
    parallel.threads = 4;
    const auto a = replicate(serial);
    const auto b = replicate(parallel);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t j = 0; j < a.values.size(); ++j) {
      EXPECT_EQ(a.values[j].log_Z.log_magnitude, b.values[j].log_Z.log_magnitude) << est;
      EXPECT_EQ(a.values[j].stream_id, j);
    }
  }
}

TEST(Replicate, DeterministicCsv) {
  const auto c = small_config("expratio", "riemann");
  std::ostringstream a;
  std::ostringstream b;
  write_csv(replicate(c), a);
  write_csv(replicate(c), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Replicate, EveryEstimatorRunsOnASuitableModel) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"gaussgauss", "naive"},        {"gaussgauss", "is"},      {"expratio", "is-ratio"},
      {"beta33", "yakowitz"},         {"expratio", "riemann"},   {"expratio", "riemann-normalized"},
      {"mvt", "qis"},                 {"beta33", "qis-simple"},  {"gaussgauss", "nested"},
      {"beta33", "nested-rect"},      {"expratio", "nested-trapezoid"},
      {"gaussgauss", "vertical"},     {"gaussgauss", "vertical-asymptotic"}};
  for (const auto& [model, est] : pairs) {
    auto c = small_config(model, est);
    c.levels = 30;
    c.per_level = 20;
    const auto report = replicate(c);
    EXPECT_TRUE(std::isfinite(report.mean_Z)) << model << " " << est;
    EXPECT_GE(*report.rmse, 0.0);
    EXPECT_GE(*report.mape, 0.0);
  }
}

TEST(Replicate, ConfigErrors) {
  auto c = small_config("gaussgauss", "qis");
  c.replicates = 0;
  EXPECT_THROW(replicate(c), ConfigError);
  EXPECT_THROW(replicate(small_config("nope", "qis")), ConfigError);
  EXPECT_THROW(replicate(small_config("gaussgauss", "nope")), ConfigError);
  EXPECT_THROW(replicate(small_config("gaussgauss", "yakowitz")), ConfigError);
  EXPECT_THROW(replicate(small_config("mvt", "riemann")), ConfigError);
  auto q = small_config("gaussgauss", "vertical");
  q.q = 1.0;
  EXPECT_THROW(replicate(q), ConfigError);
  auto m = small_config("gaussgauss", "qis");
  m.m = 5;
  EXPECT_THROW(replicate(m), ConfigError);
}

TEST(SlopeFit, ConstantModelIsDegenerate) {
  const auto fit = slope_fit(small_config("constant", "yakowitz"), {4, 8, 16});
  EXPECT_TRUE(fit.degenerate);
  EXPECT_FALSE(fit.slope);
  for (double e : fit.rmse) EXPECT_LT(e, 1e-15);
}

TEST(SlopeFit, NaiveRateOnBeta) {
  auto c = small_config("beta33", "naive");
  c.replicates = 300;
  c.threads = 0;
  const auto fit = slope_fit(c, {16, 64, 256, 1024});
  ASSERT_TRUE(fit.slope);
  EXPECT_NEAR(*fit.slope, -0.5, 0.15);
  EXPECT_GT(*fit.slope_stderr, 0.0);
}

TEST(SlopeFit, GridContract) {
  const auto c = small_config("beta33", "naive");
  EXPECT_THROW(slope_fit(c, {16, 32}), ConfigError);
  EXPECT_THROW(slope_fit(c, {16, 16, 32}), ConfigError);
  EXPECT_THROW(slope_fit(c, {32, 16, 64}), ConfigError);
  EXPECT_THROW(slope_fit(c, {0, 16, 64}), ConfigError);
}

TEST(OrderingCheck, Contract) {
  const auto qis_report = replicate(small_config("gaussgauss", "qis"));
  const auto naive_report = replicate(small_config("gaussgauss", "naive"));
  EXPECT_THROW(ordering_check({qis_report}), ConfigError);
  EXPECT_THROW(ordering_check({qis_report, replicate(small_config("expratio", "naive"))}),
               ConfigError);
  EXPECT_THROW(ordering_check({naive_report, naive_report}), ConfigError);

  ReplicationReport worse = naive_report;
  worse.rmse = *qis_report.rmse * 2.0;
  worse.mape = *qis_report.mape * 2.0;
  EXPECT_TRUE(ordering_check({qis_report, worse}));
  worse.mape = *qis_report.mape;
  EXPECT_FALSE(ordering_check({qis_report, worse}));
}

TEST(Report, CsvLayout) {
  auto c = small_config("gaussgauss", "qis");
  c.replicates = 3;
  std::ostringstream out;
  write_csv(replicate(c), out);
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 1u + 3u + 3u);
  EXPECT_EQ(lines[0], "replicate_index,estimator,model,m,n,seed,z_hat,log_z_hat,abs_rel_err");
  EXPECT_EQ(lines[1].rfind("0,qis,gaussgauss,200,10,99,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("mean,", 0), 0u);
  EXPECT_EQ(lines[5].rfind("rmse,", 0), 0u);
  EXPECT_EQ(lines[6].rfind("mape,", 0), 0u);
  for (const auto& line : lines) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
}

TEST(Report, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1.9446e-29, -66.1}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Report, ConfigJsonRoundTrip) {
  ExperimentConfig c;
  c.model_id = "mvt";
  c.estimator_id = "nested-trapezoid";
  c.m = 12345;
  c.q = 0.75;
  c.epsilon = 1e-7;
  c.seed = 18446744073709551615ull;
  c.output_format = OutputFormat::json;
  c.output_path = "x.json";
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_THROW(config_from_json("{\"bogus\": 1}"), ConfigError);
  EXPECT_THROW(config_from_json("{\"m\": \"many\"}"), ConfigError);
  EXPECT_THROW(config_from_json("not json"), ConfigError);
  EXPECT_THROW(config_from_json("{\"output_format\": \"xml\"}"), ConfigError);
}

}  // namespace
}  // namespace evidenza
