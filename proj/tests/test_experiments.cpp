#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rmtq/cli.hpp"
#include "rmtq/experiments.hpp"

using namespace rmtq;

namespace {

int cli(std::vector<std::string> args, std::string& out_text, std::string& err_text) {
  args.insert(args.begin(), "rmtq");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  out_text = out.str();
  err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("moments report") {
  ExperimentConfig c;
  c.d = 16;
  c.s = 48;
  c.p_list = {2, 3, 4};
  c.trials = 40;
  c.seed = 9;
  c.threads = 3;
  const auto r = run_moments(c);
  CHECK(r.trials.size() == 40);
  const auto j = r.to_json();
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["reference"]["exact_moments"][0]["exact"] == doctest::Approx(1.0));
  // aggregates recompute from the rows
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string key = "m" + std::to_string(c.p_list[k]);
    double sum = 0;
    for (const auto& row : r.trials) sum += row[key].get<double>();
    CHECK(j["aggregates"]["moments"][k]["mean"].get<double>() == doctest::Approx(sum / 40).epsilon(1e-14));
  }
  CHECK(r.to_csv().rfind("trial,m2,m3,m4\n", 0) == 0);
}

TEST_CASE("trial rows do not depend on the thread count") {
  ExperimentConfig c;
  c.d = 12;
  c.s = 30;
  c.p_list = {2, 5};
  c.trials = 17;
  c.threads = 1;
  const auto one = run_moments(c).trials_dump();
  c.threads = 4;
  const auto four = run_moments(c);
  CHECK(one == four.trials_dump());
  c.threads = 1;
  CHECK(run_moments(c).to_json()["aggregates"] == four.to_json()["aggregates"]);
  c.seed = 2;
  CHECK(one != run_moments(c).trials_dump());
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.d = 10;
  c.s = 10;
  c.p_list = {2};
  c.trials = 0;
  CHECK_THROWS_AS(run_moments(c), ConfigError);
  c.trials = 1;
  c.p_list = {13};
  CHECK_THROWS_AS(run_moments(c), ConfigError);
  c.p_list = {2};
  c.max_entries = 50;
  CHECK_THROWS_AS(run_moments(c), ConfigError);
  ExperimentConfig scan;
  scan.d1 = 1;
  scan.d2 = 4;
  scan.s_grid = {10};
  CHECK_THROWS_AS(run_appt_scan(scan), ConfigError);
  ExperimentConfig constants;
  constants.tau_grid = {0.0};
  CHECK_THROWS_AS(run_constants(constants), ConfigError);
}

TEST_CASE("extremal and containment reports") {
  ExperimentConfig c;
  c.d = 40;
  c.s = 4000;
  c.trials = 6;
  const auto e = run_extremal(c).to_json();
  CHECK(e["trials"].size() == 6);
  CHECK(e["aggregates"]["fraction_max_in_window"].get<double>() >= 0.0);
  for (const auto& row : e["trials"]) CHECK(row["lambda_max"].get<double>() > row["lambda_min"].get<double>());

  c.eps = 0.2;
  const auto wide = run_spectrum_containment(c).to_json();
  c.eps = -0.5;
  const auto narrow = run_spectrum_containment(c).to_json();
  CHECK(narrow["aggregates"]["fraction_contained"].get<double>() == 0.0);
  CHECK(wide["trials"][0]["lambda_min"] == narrow["trials"][0]["lambda_min"]);
}

TEST_CASE("appt scan report") {
  ExperimentConfig c;
  c.d1 = 2;
  c.d2 = 16;
  c.s_grid = {4.0 * 32, 40.0 * 32};
  c.trials = 10;
  c.bisection_steps = 3;
  const auto r = run_appt_scan(c);
  const auto j = r.to_json();
  const auto& points = j["aggregates"]["points"];
  CHECK(points[0]["appt_frequency"].get<double>() <= 0.1);
  CHECK(points[1]["appt_frequency"].get<double>() >= 0.9);
  CHECK(!j["aggregates"]["crossing"].is_null());
  CHECK(points.size() >= 3);
  CHECK(j["aggregates"]["closed_form_disagreement_rate"] == 0.0);
  for (const auto& point : points) {
    const double total = point["appt_frequency"].get<double>() + point["not_appt_frequency"].get<double>() +
                         point["unknown_frequency"].get<double>();
    CHECK(total == doctest::Approx(1.0));
  }
  const auto csv = r.to_csv();
  CHECK(csv.rfind("phase,s,ratio,trial,verdict,test,margin,closed_form_margin,closed_form_agrees\n", 0) == 0);

  // p = 4 reports the Unknown fraction
  ExperimentConfig q;
  q.d1 = 4;
  q.d2 = 4;
  q.s_grid = {16.0 * 40};
  q.trials = 5;
  const auto jq = run_appt_scan(q).to_json();
  CHECK(jq["aggregates"]["points"][0].contains("unknown_frequency"));
  CHECK_FALSE(jq["aggregates"].contains("closed_form_disagreement_rate"));
}

TEST_CASE("constants report") {
  ExperimentConfig c;
  c.d1 = 3;
  c.d2 = 27;
  const auto j = run_constants(c).to_json();
  CHECK(j["trials"].size() == 101);
  CHECK(j["trials"][0]["tau"] == 1e-4);
  CHECK(j["trials"].back()["c_tau"].get<double>() == doctest::Approx(0.180127).epsilon(1e-6));
  CHECK(j["aggregates"]["thresholds"][0]["threshold_ratio"].get<double>() == doctest::Approx(13.9282).epsilon(1e-5));
  CHECK(j["aggregates"]["thresholds"].size() == 7);
  CHECK(j["aggregates"]["s0"]["s0"] == 729.0);
}

TEST_CASE("command line") {
  std::string out, err;
  CHECK(cli({"constants", "--format", "json"}, out, err) == 0);
  CHECK(nlohmann::json::parse(out)["command"] == "constants");

  CHECK(cli({"moments", "--d", "8", "--s", "16", "--p", "2,3", "--trials", "4", "--format", "csv"}, out, err) == 0);
  CHECK(out.rfind("trial,m2,m3\n", 0) == 0);

  CHECK(cli({"appt-scan", "--d1", "2", "--d2", "4", "--s-grid", "2d,30d", "--trials", "3", "--bisection-steps", "0"},
            out, err) == 0);
  const auto scan = nlohmann::json::parse(out);
  CHECK(scan["config"]["s_grid"] == nlohmann::json::array({16, 240}));

  CHECK(cli({"moments", "--d", "0", "--s", "4", "--p", "2"}, out, err) == 2);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(cli({"moments", "--d", "4"}, out, err) == 2);
  CHECK(cli({"extremal", "--d", "4", "--s", "4", "--s-grid", "3"}, out, err) == 2);
  CHECK(cli({"appt-scan", "--d1", "2", "--d2", "4", "--s-grid", "x"}, out, err) == 2);
  CHECK(cli({}, out, err) == 2);
  CHECK(cli({"constants", "--d1", "3"}, out, err) == 2);

  // identical invocations give identical trial rows
  std::string a, b;
  cli({"extremal", "--d", "10", "--s", "50", "--trials", "5", "--seed", "3"}, a, err);
  cli({"extremal", "--d", "10", "--s", "50", "--trials", "5", "--seed", "3"}, b, err);
  CHECK(nlohmann::json::parse(a)["trials"] == nlohmann::json::parse(b)["trials"]);
}
