#include <gtest/gtest.h>

#include <json.hpp>

#include "bergman/cli.hpp"

using namespace bergman;
using nlohmann::json;

namespace {

cli::RunResult run(const std::vector<std::string>& args) {
  cli::RunResult r;
  r.exit_code = cli::run(args, r.output, r.error);
  return r;
}

}  // namespace

TEST(Cli, CoeffsEpsilonExample) {
  auto r = run({"coeffs", "--weight", "(z*w)^2 + 1/4*(z^3*w + z*w^3)", "--at", "1,0"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_NEAR(doc["at"][0]["b1"][0].get<double>(), -3.0 / 11.0, 1e-10);
  EXPECT_NEAR(doc["at"][0]["b0"][0].get<double>(), 22.0, 1e-10);
  // b0 = 4q has the three exact terms of 16 z w + 3 z^2 + 3 w^2.
  EXPECT_EQ(doc["b0"].size(), 3u);
}

TEST(Cli, QuadraticExactStrings) {
  auto r = run({"quadratic", "--r", "4"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.output, "{\"lhs\":\"5\",\"rhs\":\"81/16\",\"equal\":false}\n");
}

TEST(Cli, ObstructionCertificate) {
  auto r = run({"obstruction", "--weight-q", "(z+w)^2*(z*w+4)", "--hint-a", "1,0"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_EQ(doc["verdict"], "nonvanishing");
  EXPECT_EQ(doc["T"]["re"], "-112");
  EXPECT_EQ(doc["T"]["im"], "0");
  EXPECT_EQ(doc["lhs_k"], -12);
  EXPECT_EQ(doc["lhs_lambda"]["re"], "-112");
  EXPECT_EQ(doc["k"], 2);
  EXPECT_EQ(doc["lambda"]["re"], "3");
}

TEST(Cli, ObstructionMonomial) {
  auto r = run({"obstruction", "--weight-q", "2*z*w"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_EQ(doc["verdict"], "monomial");
  EXPECT_EQ(doc["c0"], "2");
  EXPECT_EQ(doc["m"], 1);
  EXPECT_TRUE(doc["a"].is_null());
}

TEST(Cli, KernelMonomialClosedForm) {
  auto r = run({"kernel", "--monomial", "1,4", "--at", "0,0"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_NEAR(doc["value_re"].get<double>(), 2.0 / std::pow(M_PI, 1.5), 1e-10);
  EXPECT_TRUE(doc["dmax"].is_null());
}

TEST(Cli, KernelNumericEmitsModelInfo) {
  auto r = run({"kernel", "--weight", "1/2*z*w", "--at", "0,0", "--dmax", "24"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_NEAR(doc["value_re"].get<double>(), 1.0 / M_PI, 1e-9);
  EXPECT_EQ(doc["dmax"], 24);
  EXPECT_GT(doc["validated_radius"].get<double>(), 1.0);
}

TEST(Cli, KernelWarnsOutsideRadius) {
  auto r = run({"kernel", "--weight", "(z*w)^2 + 1/4*(z^3*w + z*w^3)", "--at", "3.9,0",
                "--dmax", "24"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_EQ(doc["warning"], "outside validated radius");
}

TEST(Cli, BallCheck) {
  auto r = run({"ball-check", "--at", "0.3,0,0.1,0"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_NEAR(doc["B"].get<double>(), 4.5 * M_PI * M_PI, 1e-3);
  EXPECT_LE(doc["residual"].get<double>(), 1e-4);
}

TEST(Cli, WatsonWithValidation) {
  auto r = run({"watson", "--b", "0,0,0,1", "--alpha0", "0", "--tgrid", "50,500,8"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json doc = json::parse(r.output);
  EXPECT_NEAR(doc["d0"].get<double>(), 1.0 / (2.0 * M_PI * M_PI), 1e-12);
  double fitted = doc["fitted_d0"].get<double>();
  EXPECT_LE(std::abs(fitted - 1.0 / (2.0 * M_PI * M_PI)), 0.02 / (2.0 * M_PI * M_PI));
}

TEST(Cli, FitCsv) {
  auto r = run({"fit", "--weight", "1/2*z*w", "--at", "0.5,0", "--tgrid", "5,50,6",
                "--nterms", "2", "--format", "csv"});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.output.substr(0, 24), "t,value,fitted,residual\n");
  // Header plus one row per grid point.
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 7);
}

TEST(Cli, Determinism) {
  std::vector<std::string> args = {"coeffs", "--weight", "(z*w)^2 + 1/4*(z^3*w + z*w^3)",
                                   "--at", "1,0;0.5,0.25"};
  auto r1 = run(args);
  auto r2 = run(args);
  EXPECT_EQ(r1.exit_code, 0);
  EXPECT_EQ(r1.output, r2.output);
}

TEST(Cli, RoundTripParses) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"quadratic", "--r", "6"},
           {"kernel", "--monomial", "2,2", "--at", "0.1,0.2"},
           {"watson", "--b", "1,0", "--alpha0", "1"},
           {"obstruction", "--weight-q", "4*z*w + 3/4*z^2 + 3/4*w^2"}}) {
    auto r = run(args);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    EXPECT_NO_THROW(json::parse(r.output)) << r.output;
  }
}

TEST(Cli, ValidationErrorsExitTwo) {
  EXPECT_EQ(run({"coeffs"}).exit_code, 2);
  EXPECT_EQ(run({"coeffs", "--weight", "z +* w"}).exit_code, 2);
  EXPECT_EQ(run({"kernel", "--weight", "z^2", "--at", "0,0"}).exit_code, 2);  // inadmissible
  EXPECT_EQ(run({"quadratic", "--r", "3"}).exit_code, 2);
  EXPECT_EQ(run({"nonsense-subcommand"}).exit_code, 2);
  EXPECT_EQ(run({"quadratic", "--r", "4", "--format", "csv"}).exit_code, 2);
}

TEST(Cli, NumericFailureExitsThree) {
  // Passes every admissibility check (q = (z+w)^2 >= 0 on the circle) yet
  // p itself turns negative along theta = pi/2, so the radial moment
  // integrals diverge: a numeric failure, not a validation one.
  auto r = run({"kernel", "--weight", "1/3*z^3*w + 1/2*z^2*w^2 + 1/3*z*w^3",
                "--at", "0,0"});
  EXPECT_EQ(r.exit_code, 3) << r.error;
}

TEST(Cli, OutFileWritesAndSilencesStdout) {
  std::string path = "/tmp/bergman_cli_test_out.json";
  auto r = run({"quadratic", "--r", "2", "--out", path});
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_TRUE(r.output.empty());
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "{\"lhs\":\"9\",\"rhs\":\"9\",\"equal\":true}\n");
}
