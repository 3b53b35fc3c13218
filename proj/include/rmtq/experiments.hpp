#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace rmtq {

/// Invalid experiment configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  int d = 0;
  int d1 = 0;
  int d2 = 0;
  int s = 0;
  std::vector<double> s_grid;  // environment dimensions for appt-scan
  std::vector<int> p_list;     // moment orders
  int trials = 100;
  std::uint64_t seed = 1;
  double eps = 0.2;
  int bisection_steps = 6;
  std::vector<double> tau_grid;  // empty: default grid
  std::int64_t max_entries = 100'000'000;
  unsigned threads = 0;  // 0: RMTQ_THREADS or hardware concurrency
  OutputFormat format = OutputFormat::Json;
  std::string out;
};

/// Config echo, per-trial rows, aggregates and reference values for one run.
///
/// Aggregates are recomputable from the trial rows. Everything except the
/// `metadata` object is a pure function of the config.
struct ExperimentReport {
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json reference;
  std::vector<nlohmann::ordered_json> trials;
  nlohmann::ordered_json aggregates;
  nlohmann::ordered_json metadata;
  std::vector<std::string> csv_columns;

  nlohmann::ordered_json to_json() const;
  /// One row per trial with `csv_columns`; the header is always emitted.
  std::string to_csv() const;
  /// Serialized trial rows alone, the unit of the determinism contract.
  std::string trials_dump() const;
};

inline constexpr const char* kLibraryVersion = "0.1.0";

/// (1/d) tr Z_d^p per trial against the exact moment formula.
ExperimentReport run_moments(const ExperimentConfig& config);

/// Extreme eigenvalues of Z_d per trial; fractions inside 2 +- eps and -2 +- eps.
ExperimentReport run_extremal(const ExperimentConfig& config);

/// APPT verdict frequencies of induced states over an s-grid, with a
/// bisection refinement of the s at which the APPT frequency crosses 1/2.
ExperimentReport run_appt_scan(const ExperimentConfig& config);

/// Fraction of induced states whose spectrum lies in
/// [1/d - 2(1+eps)/sqrt(ds), 1/d + 2(1+eps)/sqrt(ds)].
ExperimentReport run_spectrum_containment(const ExperimentConfig& config);

/// C_tau table, fixed-p thresholds and s0 brackets.
ExperimentReport run_constants(const ExperimentConfig& config);

/// Thread count from RMTQ_THREADS, else hardware concurrency.
unsigned default_thread_count();

/// Evaluates `trial(i)` for i in [0, n) on `threads` workers and returns the
/// results in index order, so the output never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_trials(int n, unsigned threads, Fn&& trial) {
  std::vector<Result> results(static_cast<std::size_t>(n));
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) results[i] = trial(i);
    return results;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) results[i] = trial(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace rmtq
