#include "rmtq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>

#include "rmtq/appt.hpp"
#include "rmtq/asymptotics.hpp"
#include "rmtq/moments.hpp"
#include "rmtq/random_states.hpp"

namespace rmtq {

using nlohmann::ordered_json;

namespace {

// Neumaier-compensated sum in index order.
double stable_sum(const std::vector<double>& xs) {
  double sum = 0, comp = 0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

struct MeanStats {
  double mean;
  double standard_error;
};

MeanStats mean_and_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = stable_sum(xs) / n;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = xs.size() > 1 ? stable_sum(sq) / (n - 1) : 0.0;
  return {mean, std::sqrt(var / n)};
}

unsigned threads_for(const ExperimentConfig& c) { return c.threads != 0 ? c.threads : default_thread_count(); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_trials(const ExperimentConfig& c) { require(c.trials >= 1, "--trials must be >= 1"); }

void check_memory(const ExperimentConfig& c, std::int64_t rows, std::int64_t cols) {
  require(rows * cols <= c.max_entries, "d * s = " + std::to_string(rows * cols) + " exceeds the cap of " +
                                            std::to_string(c.max_entries) + " matrix entries");
}

ordered_json base_config(const ExperimentConfig& c) {
  return ordered_json{{"seed", c.seed}, {"trials", c.trials}};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(ExperimentReport& report, const Stopwatch& clock, unsigned threads) {
  report.metadata = ordered_json{
      {"version", kLibraryVersion}, {"wall_clock_seconds", clock.seconds()}, {"threads", threads}};
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("RMTQ_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["reference"] = reference;
  j["trials"] = trials;
  j["aggregates"] = aggregates;
  j["metadata"] = metadata;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < csv_columns.size(); ++c) out << (c ? "," : "") << csv_columns[c];
  out << '\n';
  for (const auto& row : trials) {
    for (std::size_t c = 0; c < csv_columns.size(); ++c) {
      if (c) out << ',';
      const auto it = row.find(csv_columns[c]);
      if (it == row.end()) continue;
      if (it->is_string()) {
        out << it->get<std::string>();
      } else {
        out << it->dump();
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string ExperimentReport::trials_dump() const { return ordered_json(trials).dump(); }

ExperimentReport run_moments(const ExperimentConfig& c) {
  check_trials(c);
  require(c.d >= 1 && c.s >= 1, "moments needs --d >= 1 and --s >= 1");
  require(!c.p_list.empty(), "moments needs at least one order in --p");
  for (int p : c.p_list) require(p >= 1 && p <= kDefaultMaxDegree, "moment orders must lie in [1, 12]");
  check_memory(c, c.d, c.s);

  Stopwatch clock;
  ExperimentReport report;
  report.command = "moments";
  report.config = base_config(c);
  report.config["d"] = c.d;
  report.config["s"] = c.s;
  report.config["p"] = c.p_list;

  ordered_json exact = ordered_json::array();
  std::vector<double> exact_values;
  for (int p : c.p_list) {
    const auto m = centered_wishart_moment(p, c.d, c.s);
    exact_values.push_back(m.value);
    exact.push_back(ordered_json{{"p", p}, {"exact", m.value}, {"table", nlohmann::json(m.table)}});
  }
  report.reference = ordered_json{{"exact_moments", exact}};

  const unsigned threads = threads_for(c);
  const auto rows = run_trials<std::vector<double>>(c.trials, threads, [&](int trial) {
    const auto w = sample_wishart(c.d, c.s, RngStream{c.seed, static_cast<std::uint64_t>(trial)});
    const auto spec = hermitian_eigenvalues(centered_normalized(w, c.d, c.s));
    std::vector<double> out;
    for (int p : c.p_list) {
      std::vector<double> powers;
      for (double x : spec.values()) powers.push_back(std::pow(x, p));
      out.push_back(stable_sum(powers) / c.d);
    }
    return out;
  });

  report.csv_columns = {"trial"};
  for (int p : c.p_list) report.csv_columns.push_back("m" + std::to_string(p));
  for (int t = 0; t < c.trials; ++t) {
    ordered_json row{{"trial", t}};
    for (std::size_t k = 0; k < c.p_list.size(); ++k) row["m" + std::to_string(c.p_list[k])] = rows[t][k];
    report.trials.push_back(std::move(row));
  }

  ordered_json per_order = ordered_json::array();
  for (std::size_t k = 0; k < c.p_list.size(); ++k) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r[k]);
    const auto st = mean_and_se(xs);
    const double z = st.standard_error > 0 ? (st.mean - exact_values[k]) / st.standard_error : 0.0;
    per_order.push_back(ordered_json{{"p", c.p_list[k]},
                                     {"exact", exact_values[k]},
                                     {"mean", st.mean},
                                     {"standard_error", st.standard_error},
                                     {"z_score", z}});
  }
  report.aggregates = ordered_json{{"moments", per_order}};
  finish(report, clock, threads);
  return report;
}

ExperimentReport run_extremal(const ExperimentConfig& c) {
  check_trials(c);
  require(c.d >= 1 && c.s >= 1, "extremal needs --d >= 1 and --s >= 1");
  require(c.eps > 0, "extremal needs --eps > 0 (half-width of the window around +-2)");
  check_memory(c, c.d, c.s);

  Stopwatch clock;
  ExperimentReport report;
  report.command = "extremal";
  report.config = base_config(c);
  report.config["d"] = c.d;
  report.config["s"] = c.s;
  report.config["eps"] = c.eps;
  const double shift = std::sqrt(static_cast<double>(c.d) / c.s);
  report.reference = ordered_json{{"limit_edges", {-2.0, 2.0}},
                                  {"window", {2.0 - c.eps, 2.0 + c.eps}},
                                  {"finite_ratio_edges", {-2.0 + shift, 2.0 + shift}}};

  const unsigned threads = threads_for(c);
  const auto rows = run_trials<std::pair<double, double>>(c.trials, threads, [&](int trial) {
    const auto w = sample_wishart(c.d, c.s, RngStream{c.seed, static_cast<std::uint64_t>(trial)});
    const auto spec = hermitian_eigenvalues(centered_normalized(w, c.d, c.s));
    return std::pair{spec.largest(), spec.smallest()};
  });

  report.csv_columns = {"trial", "lambda_max", "lambda_min"};
  int max_inside = 0, min_inside = 0;
  std::vector<double> maxima, minima;
  for (int t = 0; t < c.trials; ++t) {
    const auto [hi, lo] = rows[t];
    report.trials.push_back(ordered_json{{"trial", t}, {"lambda_max", hi}, {"lambda_min", lo}});
    if (hi >= 2.0 - c.eps && hi <= 2.0 + c.eps) ++max_inside;
    if (lo >= -2.0 - c.eps && lo <= -2.0 + c.eps) ++min_inside;
    maxima.push_back(hi);
    minima.push_back(lo);
  }
  report.aggregates = ordered_json{{"fraction_max_in_window", static_cast<double>(max_inside) / c.trials},
                                   {"fraction_min_in_window", static_cast<double>(min_inside) / c.trials},
                                   {"mean_lambda_max", mean_and_se(maxima).mean},
                                   {"mean_lambda_min", mean_and_se(minima).mean}};
  finish(report, clock, threads);
  return report;
}

namespace {

struct ScanTrial {
  ApptVerdict verdict;
  std::optional<double> closed_form_margin;
};

struct ScanPoint {
  int s;
  std::vector<ScanTrial> trials;
  double appt_frequency() const {
    const auto n = std::count_if(trials.begin(), trials.end(),
                                 [](const ScanTrial& t) { return t.verdict.verdict == Verdict::AbsolutelyPPT; });
    return static_cast<double>(n) / trials.size();
  }
};

bool closed_form_agrees(const ScanTrial& t) {
  if (!t.closed_form_margin) return true;
  const bool closed_appt = *t.closed_form_margin >= -1e-10 * std::abs(t.verdict.margin);
  return closed_appt == (t.verdict.verdict == Verdict::AbsolutelyPPT);
}

}  // namespace

ExperimentReport run_appt_scan(const ExperimentConfig& c) {
  check_trials(c);
  require(c.d1 >= 2 && c.d2 >= 2, "appt-scan needs --d1 >= 2 and --d2 >= 2");
  require(!c.s_grid.empty(), "appt-scan needs a non-empty --s-grid");
  require(c.bisection_steps >= 0, "bisection steps must be >= 0");
  const int d = c.d1 * c.d2;
  const int p = std::min(c.d1, c.d2);
  std::vector<int> grid;
  for (double s : c.s_grid) {
    require(s >= 1, "--s-grid entries must be >= 1");
    check_memory(c, d, static_cast<std::int64_t>(std::llround(s)));
    grid.push_back(static_cast<int>(std::llround(s)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Stopwatch clock;
  ExperimentReport report;
  report.command = "appt-scan";
  report.config = base_config(c);
  report.config["d1"] = c.d1;
  report.config["d2"] = c.d2;
  report.config["s_grid"] = grid;
  report.config["bisection_steps"] = c.bisection_steps;
  report.reference = ordered_json{{"p", p},
                                  {"d", d},
                                  {"fixed_p_threshold_ratio", threshold_p_fixed(p)},
                                  {"fixed_p_threshold_s", threshold_p_fixed(p) * d},
                                  {"large_p_scale_4p2d", 4.0 * p * p * d}};

  const unsigned threads = threads_for(c);
  auto evaluate = [&](int s) {
    ScanPoint point{s, {}};
    // common random numbers: the same streams at every s
    point.trials = run_trials<ScanTrial>(c.trials, threads, [&](int trial) {
      const auto rho = sample_induced_state(c.d1, c.d2, s, RngStream{c.seed, static_cast<std::uint64_t>(trial)});
      const auto spec = hermitian_eigenvalues(rho.matrix());
      ScanTrial out{appt_verdict(spec, c.d1, c.d2), std::nullopt};
      if (p == 2) out.closed_form_margin = appt_closed_form_p2_margin(validate_state_spectrum(spec));
      return out;
    });
    return point;
  };

  std::vector<std::pair<std::string, ScanPoint>> points;
  for (int s : grid) points.emplace_back("grid", evaluate(s));

  ordered_json crossing = nullptr;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i].second.appt_frequency() < 0.5 && points[i + 1].second.appt_frequency() >= 0.5) {
      int lo = points[i].second.s;
      int hi = points[i + 1].second.s;
      for (int step = 0; step < c.bisection_steps; ++step) {
        const int mid = static_cast<int>(std::llround(0.5 * (lo + hi)));
        if (mid == lo || mid == hi) break;
        points.emplace_back("bisection", evaluate(mid));
        if (points.back().second.appt_frequency() < 0.5) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double s_cross = 0.5 * (lo + hi);
      crossing = ordered_json{{"bracket_s", {lo, hi}}, {"s", s_cross}, {"ratio", s_cross / d}};
      break;
    }
  }

  report.csv_columns = {"phase", "s", "ratio", "trial", "verdict", "test", "margin", "closed_form_margin",
                        "closed_form_agrees"};
  ordered_json summary = ordered_json::array();
  std::size_t compared = 0, disagreements = 0;
  for (const auto& [phase, point] : points) {
    int counts[3] = {0, 0, 0};
    int point_disagreements = 0;
    for (std::size_t t = 0; t < point.trials.size(); ++t) {
      const auto& tr = point.trials[t];
      ordered_json row{{"phase", phase},
                       {"s", point.s},
                       {"ratio", static_cast<double>(point.s) / d},
                       {"trial", t},
                       {"verdict", to_string(tr.verdict.verdict)},
                       {"test", to_string(tr.verdict.test)},
                       {"margin", tr.verdict.margin}};
      if (tr.closed_form_margin) {
        const bool agrees = closed_form_agrees(tr);
        row["closed_form_margin"] = *tr.closed_form_margin;
        row["closed_form_agrees"] = agrees;
        ++compared;
        if (!agrees) {
          ++disagreements;
          ++point_disagreements;
        }
      }
      ++counts[static_cast<int>(tr.verdict.verdict)];
      report.trials.push_back(std::move(row));
    }
    const double n = static_cast<double>(point.trials.size());
    summary.push_back(ordered_json{{"phase", phase},
                                   {"s", point.s},
                                   {"ratio", static_cast<double>(point.s) / d},
                                   {"appt_frequency", counts[0] / n},
                                   {"not_appt_frequency", counts[1] / n},
                                   {"unknown_frequency", counts[2] / n},
                                   {"closed_form_disagreements", point_disagreements}});
  }
  report.aggregates = ordered_json{{"points", summary}, {"crossing", crossing}};
  if (p == 2) {
    report.aggregates["closed_form_disagreement_rate"] =
        compared ? static_cast<double>(disagreements) / compared : 0.0;
  }
  finish(report, clock, threads);
  return report;
}

ExperimentReport run_spectrum_containment(const ExperimentConfig& c) {
  check_trials(c);
  require(c.d >= 1 && c.s >= 1, "containment needs --d >= 1 and --s >= 1");
  require(c.eps > -1.0, "containment needs --eps > -1");
  check_memory(c, c.d, c.s);

  Stopwatch clock;
  ExperimentReport report;
  report.command = "containment";
  report.config = base_config(c);
  report.config["d"] = c.d;
  report.config["s"] = c.s;
  report.config["eps"] = c.eps;
  const double center = 1.0 / c.d;
  const double half_width = 2.0 * (1.0 + c.eps) / std::sqrt(static_cast<double>(c.d) * c.s);
  report.reference = ordered_json{{"interval", {center - half_width, center + half_width}}};

  const unsigned threads = threads_for(c);
  const auto rows = run_trials<std::pair<double, double>>(c.trials, threads, [&](int trial) {
    HermitianMatrix w = sample_wishart(c.d, c.s, RngStream{c.seed, static_cast<std::uint64_t>(trial)});
    w *= 1.0 / w.trace();
    const auto spec = hermitian_eigenvalues(w);
    return std::pair{spec.smallest(), spec.largest()};
  });

  report.csv_columns = {"trial", "lambda_min", "lambda_max", "contained"};
  int contained = 0;
  for (int t = 0; t < c.trials; ++t) {
    const auto [lo, hi] = rows[t];
    const bool inside = lo >= center - half_width && hi <= center + half_width;
    contained += inside;
    report.trials.push_back(ordered_json{{"trial", t}, {"lambda_min", lo}, {"lambda_max", hi}, {"contained", inside}});
  }
  report.aggregates = ordered_json{{"fraction_contained", static_cast<double>(contained) / c.trials}};
  finish(report, clock, threads);
  return report;
}

ExperimentReport run_constants(const ExperimentConfig& c) {
  std::vector<double> taus = c.tau_grid;
  if (taus.empty()) {
    taus.push_back(1e-4);
    for (int k = 1; k <= 100; ++k) taus.push_back(k / 100.0);
  }
  for (double t : taus) require(t > 0 && t <= 1, "tau values must lie in (0, 1]");

  Stopwatch clock;
  ExperimentReport report;
  report.command = "constants";
  report.config = ordered_json{{"tau_grid", taus}};
  report.reference = ordered_json{{"C_1", 16.0 / (9.0 * std::numbers::pi * std::numbers::pi)}, {"C_0", 1.0}};

  report.csv_columns = {"tau", "quantile", "c_tau", "c_tau_closed_form"};
  for (double t : taus) {
    report.trials.push_back(ordered_json{{"tau", t},
                                         {"quantile", semicircle_quantile_c(t)},
                                         {"c_tau", c_tau(t)},
                                         {"c_tau_closed_form", c_tau_closed_form(t)}});
  }

  ordered_json thresholds = ordered_json::array();
  for (int p = 2; p <= 8; ++p) thresholds.push_back(ordered_json{{"p", p}, {"threshold_ratio", threshold_p_fixed(p)}});
  report.aggregates = ordered_json{{"thresholds", thresholds}};
  if (c.d1 >= 2 && c.d2 >= 2) {
    const auto scale = threshold_scale_s0(c.d1, c.d2);
    report.config["d1"] = c.d1;
    report.config["d2"] = c.d2;
    report.aggregates["s0"] = ordered_json{{"d1", c.d1},
                                           {"d2", c.d2},
                                           {"s0", scale.s0},
                                           {"tau", scale.tau},
                                           {"lower_constant", scale.lower_constant},
                                           {"upper_constant", scale.upper_constant}};
  }
  finish(report, clock, 1);
  return report;
}

}  // namespace rmtq
