#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hsd/cli.hpp"

using hsd::cli::run_job;
using json = nlohmann::json;

namespace {

json report_of(const hsd::cli::JobResult& r) { return json::parse(r.report); }

std::string read_config(const std::string& name) {
  std::ifstream in(std::string(HSD_CONFIG_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, PseriesExample) {
  auto r = run_job(R"({"command":"pseries","law":{"type":"witt2","alphas":[1]},"context":{"p":2,"e":2,"m":2},"N":2})");
  EXPECT_EQ(r.exit_code, 0);
  json j = report_of(r);
  EXPECT_EQ(j["result"]["series"], json::array({"v2^2", "0"}));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, HnExample) {
  auto r = run_job(R"({"command":"hn","context":{"p":3},"n":0})");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(report_of(r)["result"]["h"], "x^2*y + x*y^2");
}

TEST(Cli, AdditiveAndMultiplicativeSeries) {
  auto ga = run_job(R"({"command":"pseries","context":{"p":3,"m":1},"N":3})");
  EXPECT_EQ(report_of(ga)["result"]["series"], json::array({"0"}));
  auto gm = run_job(R"({"command":"law-check","law":{"type":"multiplicative"},"context":{"p":3,"m":1}})");
  EXPECT_EQ(gm.exit_code, 0);
  EXPECT_EQ(report_of(gm)["result"]["components"], json::array({"v1 + w1 + v1*w1"}));
}

TEST(Cli, ExpectedValueMismatchFails) {
  auto r = run_job(R"({"command":"pseries","context":{"p":3,"m":1},"N":2,"expected":["v1"]})");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(report_of(r)["pass"].get<bool>());
}

TEST(Cli, MalformedInputs) {
  EXPECT_EQ(run_job("{not json").exit_code, 2);
  EXPECT_EQ(run_job("[]").exit_code, 2);
  EXPECT_EQ(run_job(R"({"command":"frobnicate","context":{"p":2}})").exit_code, 2);
  EXPECT_EQ(run_job(R"({"command":"pseries","context":{"m":1},"N":2})").exit_code, 2);
  EXPECT_EQ(run_job(R"({"command":"pseries","context":{"p":4,"m":1},"N":2})").exit_code, 2);
  EXPECT_EQ(run_job(R"({"command":"pseries","context":{"p":3,"m":0},"N":2})").exit_code, 2);
}

TEST(Cli, InvalidCustomLawIsADomainFailure) {
  auto r = run_job(R"({"command":"law-check","law":{"type":"custom","components":["v1 + 2*w1"]},"context":{"p":3,"m":1}})");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(report_of(r)["error"]["kind"], "LawAxiomViolation");
}

TEST(Cli, ResourceLimits) {
  EXPECT_EQ(run_job(R"({"command":"pseries","context":{"p":2,"m":4},"N":2})").exit_code, 3);
  EXPECT_EQ(run_job(R"({"command":"pseries","context":{"p":5,"e":3,"m":3},"N":2})").exit_code, 3);
  EXPECT_EQ(run_job(R"({"command":"tower","context":{"p":3,"e":2,"m":3}})").exit_code, 3);
}

TEST(Cli, DomainFailureAfterSetup) {
  auto r = run_job(R"({"command":"basis-find","derivation":{"type":"trivial"},"law":{"type":"additive"},"context":{"p":2,"m":1}})");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(report_of(r)["error"]["kind"], "HypothesisFailure");
}

TEST(Cli, ReportEchoesConfigAndIsDeterministic) {
  const std::string cfg = read_config("tower_product.json");
  auto a = run_job(cfg), b = run_job(cfg, 4);
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(report_of(a)["config"], json::parse(cfg));
}

TEST(Cli, ShippedConfigsPass) {
  for (const char* name : {"basis_find_twist.json", "basis_verify_canonical.json", "evp_gf4.json", "hn_p3.json",
                           "iterativity_twist.json", "law_check_custom.json", "law_check_gm.json",
                           "pseries_witt2.json", "structure_constants.json", "tower_product.json",
                           "wronskian_dependent.json", "wronskian_gm.json"}) {
    auto r = run_job(read_config(name));
    EXPECT_EQ(r.exit_code, 0) << name << "\n" << r.report;
  }
}

TEST(Cli, Selftest) {
  auto r = run_job(R"({"command":"selftest"})", 2);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(report_of(r)["result"]["checks"].size(), 12u);
}
