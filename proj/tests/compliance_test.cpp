#include <gtest/gtest.h>

#include <stdexcept>

#include "ecsim/compliance.hpp"
#include "ecsim/scenario_io.hpp"
#include "support/fixtures.hpp"

using namespace ecsim::sim;

namespace {

SimScenario baseline(std::uint64_t runs) {
  auto s = load_scenario(fixtures::data("aeb_baseline_scenario.json"));
  s.runs = runs;
  return s;
}

}  // namespace

TEST(SummarizeBatch, RequirementSet) {
  const auto s = baseline(2000);
  const auto summary = summarize_batch(s, run_monte_carlo(s));
  std::vector<std::string> ids;
  for (const auto& o : summary.requirements) ids.push_back(o.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"ECREQ-1.1", "ECREQ-1.2", "ECREQ-2", "ACQ", "DET",
                                           "TRJ", "COL", "WRN", "DET-ERROR-RATE", "TREQ-1"}));
  EXPECT_EQ(summary.runs, 2000u);
  EXPECT_EQ(summary.dominant_budget, "ACQ");
  EXPECT_FALSE(summary.find("ECREQ-2")->passed);
  EXPECT_TRUE(summary.find("TREQ-1")->passed);
  EXPECT_TRUE(summary.find("ECREQ-1.1")->passed);
  EXPECT_TRUE(summary.find("ECREQ-1.2")->passed);
  EXPECT_EQ(summary.find("DET-ERROR-RATE")->violation_fraction,
            summary.find("ACQ")->violation_fraction);
  EXPECT_EQ(summary.find("DET-ERROR-RATE")->admissible, 0.01);
  EXPECT_FALSE(summary.all_passed());
}

TEST(SummarizeBatch, AdmissibleFractionsDecidePass) {
  auto s = baseline(2000);
  s.requirements.admissible["ECREQ-2"] = 0.5;
  s.requirements.admissible["ACQ"] = 0.5;
  s.requirements.det_error_rate_limit = 0.5;
  const auto summary = summarize_batch(s, run_monte_carlo(s));
  EXPECT_TRUE(summary.all_passed());
  EXPECT_EQ(summary.find("ECREQ-2")->admissible, 0.5);
}

TEST(SummarizeBatch, LiteralStoppingRequirement) {
  auto s = baseline(500);
  s.requirements.ecreq12_mode = Ecreq12Mode::kLiteral;
  const auto summary = summarize_batch(s, run_monte_carlo(s));
  // t4 - t2 is about 7.8 s while TTR at brake onset is just below zero.
  EXPECT_EQ(summary.find("ECREQ-1.2")->violations, 0u);
  EXPECT_EQ(summary.find("ECREQ-1.2")->observable, 500u);
}

TEST(SummarizeBatch, DecelerationToleranceMatters) {
  auto s = baseline(200);
  s.requirements.decel_tolerance = 0.0;
  // Average over t2..t4 is 30/7.8 = 3.85 m/s^2 < 4 with the ramp included.
  EXPECT_EQ(summarize_batch(s, run_monte_carlo(s)).find("ECREQ-1.1")->violation_fraction, 1.0);
}

TEST(Sweep, EmptyAndSingleValue) {
  const auto s = baseline(1000);
  EXPECT_TRUE(sweep(s, "f_sensor", std::vector<double>{}).empty());
  const std::vector<double> ten = {10.0};
  const auto points = sweep(s, "f_sensor", ten);
  ASSERT_EQ(points.size(), 1u);
  const auto direct = summarize_batch(s, run_monte_carlo(s));
  EXPECT_EQ(points[0].summary.find("ECREQ-2")->violations, direct.find("ECREQ-2")->violations);
  EXPECT_EQ(points[0].summary.warning_lead_p50, direct.warning_lead_p50);
}

TEST(Sweep, SensorFrequencyLowersViolations) {
  const auto s = baseline(4000);
  const std::vector<double> values = {10.0, 20.0};
  const auto points = sweep(s, "f_sensor", values);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_LT(points[1].summary.find("ECREQ-2")->violation_fraction,
            points[0].summary.find("ECREQ-2")->violation_fraction);
}

TEST(Sweep, RejectsUnknownParameterAndInvalidValues) {
  const auto s = baseline(10);
  const std::vector<double> values = {1.0};
  EXPECT_THROW(sweep(s, "bogus", values), std::invalid_argument);
  EXPECT_THROW(sweep(s, "bogus", std::vector<double>{}), std::invalid_argument);
  const std::vector<double> negative = {-5.0};
  EXPECT_THROW(sweep(s, "f_trj", negative), std::invalid_argument);
  for (auto name : kSweepParameters) {
    SimScenario copy = s;
    EXPECT_NO_THROW(apply_parameter(copy, name, 1.0)) << name;
  }
}
