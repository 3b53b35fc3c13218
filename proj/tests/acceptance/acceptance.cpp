// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <algorithm>
#include <numbers>
#include <random>
#include <string>

#include "../oracles.hpp"
#include "rmtq/appt.hpp"
#include "rmtq/asymptotics.hpp"
#include "rmtq/experiments.hpp"
#include "rmtq/moments.hpp"
#include "rmtq/permutation.hpp"
#include "rmtq/random_states.hpp"

using namespace rmtq;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("[%s] %2d. %s: %s (%.1fs, budget %.0fs)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
              secs, budget_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Spectrum random_spectrum(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double spread = std::pow(10.0, -3.0 + 3.5 * unit(rng));
  std::vector<double> v(d);
  double total = 0;
  while (total == 0.0) {
    for (auto& x : v) {
      x = std::max(0.0, 1.0 + spread * (unit(rng) - 0.5) * d);
      total += x;
    }
  }
  for (auto& x : v) x /= total;
  return validate_state_spectrum(Spectrum(v));
}

double max_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  double worst = 0;
  for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

}  // namespace

int main() {
  criterion(1, "moment table equals inclusion-exclusion brute force, p <= 6", 10, [] {
    for (int p = 1; p <= 6; ++p) {
      const auto table = centered_wishart_moment_table(p);
      std::map<std::pair<int, int>, std::int64_t> got;
      for (const auto& [key, count] : table.coefficients())
        got[key] = static_cast<std::int64_t>(count);
      if (got != oracle::inclusion_exclusion_table(p)) return Outcome{false, fmt("tables differ at p=%d", p)};
    }
    return Outcome{true, "integer tables identical for p = 1..6"};
  });

  criterion(2, "exact moments vs Monte Carlo, d=64 s=256, 2000 trials", 180, [] {
    ExperimentConfig c;
    c.d = 64;
    c.s = 256;
    c.p_list = {2, 3, 4, 5, 6};
    c.trials = 2000;
    c.seed = 2024;
    const auto j = run_moments(c).to_json();
    bool ok = true;
    std::string detail;
    for (const auto& row : j["aggregates"]["moments"]) {
      const double z = row["z_score"].get<double>();
      ok = ok && std::abs(z) <= 3.0;
      detail += fmt("p=%d z=%+.2f ", row["p"].get<int>(), z);
    }
    const double m2 = j["aggregates"]["moments"][0]["exact"].get<double>();
    ok = ok && m2 == 1.0;
    return Outcome{ok, detail + fmt("exact m2=%.17g", m2)};
  });

  criterion(3, "large-d limits of the exact formula", 1, [] {
    const double d = 2000;
    const double semi = std::abs(centered_wishart_moment(4, d, d * d).value - static_cast<double>(catalan(2)));
    double nc = 0;
    for (const auto& pi : nc_partitions_without_singletons(4)) nc += std::pow(4.0, pi.block_count() - 2);
    const double ratio = std::abs(centered_wishart_moment(4, d, 4 * d).value - nc);
    const double halving =
        centered_wishart_moment(3, d, 4 * d * d).value / centered_wishart_moment(3, d, d * d).value;
    const bool ok = semi < 0.05 && ratio < 0.05 && std::abs(halving - 0.5) < 1e-12;
    return Outcome{ok, fmt("|m4-Cat2|=%.2e |m4-NC sum|=%.2e m3 ratio on 4x s=%.12f", semi, ratio, halving)};
  });

  criterion(4, "pairing, non-crossing and genus-stripping counts", 30, [] {
    bool ok = epsilon_count(2, 0) == 2 && epsilon_count(2, 1) == 1;
    for (int n = 1; n <= 5; ++n) {
      std::uint64_t total = 0;
      for (int g = 0; g <= n; ++g) total += epsilon_count(n, g);
      ok = ok && total == double_factorial(2 * n - 1);
    }
    const std::size_t riordan[] = {0, 1, 1, 3, 6, 15};
    for (int p = 1; p <= 6; ++p) ok = ok && nc_partitions_without_singletons(p).size() == riordan[p - 1];
    long checked = 0;
    for (int p = 1; p <= 6; ++p) {
      std::vector<int> images(p);
      std::iota(images.begin(), images.end(), 1);
      do {
        const Permutation a(images);
        const auto stripped = strip_fixed_points(a);
        if (stripped.permutation.size() > 0) ok = ok && genus(stripped.permutation) == genus(a);
        ++checked;
      } while (std::next_permutation(images.begin(), images.end()));
    }
    return Outcome{ok, fmt("sum_g eps(n,g) = (2n-1)!! for n<=5, |NC(p)| = 0,1,1,3,6,15, %ld permutations stripped", checked)};
  });

  criterion(5, "extremal eigenvalues, d=300 s=30000, 50 trials", 240, [] {
    ExperimentConfig c;
    c.d = 300;
    c.s = 30000;
    c.trials = 50;
    c.eps = 0.2;
    c.seed = 5;
    const auto j = run_extremal(c).to_json();
    const double fmax = j["aggregates"]["fraction_max_in_window"].get<double>();
    const double fmin = j["aggregates"]["fraction_min_in_window"].get<double>();
    return Outcome{fmax >= 0.95 && fmin >= 0.95,
                   fmt("lambda_max in [1.8,2.2]: %.0f%%, lambda_min in [-2.2,-1.8]: %.0f%%", 100 * fmax, 100 * fmin)};
  });

  criterion(6, "spectrum containment, d=100 s=1e4 eps=0.2, 200 trials", 120, [] {
    ExperimentConfig c;
    c.d = 100;
    c.s = 10000;
    c.trials = 200;
    c.eps = 0.2;
    c.seed = 6;
    const double f = run_spectrum_containment(c).to_json()["aggregates"]["fraction_contained"].get<double>();
    return Outcome{f >= 0.95, fmt("contained: %.1f%%", 100 * f)};
  });

  criterion(7, "verdict lattice on 1e4 random spectra, p in {2,3}", 120, [] {
    std::mt19937_64 rng(7);
    int violations = 0, certified = 0, necessary_failed = 0, exact_true = 0;
    for (int t = 0; t < 10000; ++t) {
      const int p = 2 + t % 2;
      const int d = p == 2 ? 4 + static_cast<int>(rng() % 8) : 9 + static_cast<int>(rng() % 8);
      const auto lambda = random_spectrum(d, rng);
      const bool exact = appt_exact_small_p(lambda, p);
      const bool suff = appt_sufficient_norm_bound(lambda, d, p).certified;
      const bool nec = appt_necessary_all_ones(lambda, p).failed;
      certified += suff;
      necessary_failed += nec;
      exact_true += exact;
      if ((suff && !exact) || (nec && exact)) ++violations;
    }
    return Outcome{violations == 0, fmt("violations=%d (certified=%d, exact APPT=%d, all-ones failed=%d)", violations,
                                        certified, exact_true, necessary_failed)};
  });

  criterion(8, "fixed-p threshold, d1=2 d2=128, 100 trials", 300, [] {
    ExperimentConfig c;
    c.d1 = 2;
    c.d2 = 128;
    c.s_grid = {8.0 * 256, 20.0 * 256};
    c.trials = 100;
    c.bisection_steps = 6;
    c.seed = 8;
    const auto j = run_appt_scan(c).to_json();
    const auto& points = j["aggregates"]["points"];
    const double f8 = points[0]["appt_frequency"].get<double>();
    const double f20 = points[1]["appt_frequency"].get<double>();
    const auto& crossing = j["aggregates"]["crossing"];
    const double ratio = crossing.is_null() ? 0.0 : crossing["ratio"].get<double>();
    const double disagreement = j["aggregates"]["closed_form_disagreement_rate"].get<double>();
    const bool ok = f8 <= 0.10 && f20 >= 0.90 && ratio >= 11 && ratio <= 17;
    return Outcome{ok, fmt("APPT at 8d: %.0f%%, at 20d: %.0f%%, crossing s/d=%.3f (limit %.3f), all-pairs vs "
                           "p=2 closed form disagreement rate %.4f over %zu samples",
                           100 * f8, 100 * f20, ratio, threshold_p_fixed(2), disagreement, j["trials"].size())};
  });

  criterion(9, "constants", 5, [] {
    const double c1 = c_tau(1.0);
    const double err1 = std::abs(c1 - 16.0 / (9.0 * std::numbers::pi * std::numbers::pi));
    const double c0 = c_tau(1e-4);
    // strictly monotone on the grid; C_0 = 1 > C_1 forces the decreasing direction
    bool monotone = true;
    double previous = c_tau(0.01);
    for (int k = 2; k <= 100; ++k) {
      const double now = c_tau(k / 100.0);
      monotone = monotone && now < previous;
      previous = now;
    }
    double boundary_err = 0;
    for (int p = 2; p <= 6; ++p) {
      double lo = 1.0001, hi = 1000.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermitian_eigenvalues(lambda_c_limit_matrix(mid, p).matrix).smallest() < 0 ? lo : hi) = mid;
      }
      boundary_err = std::max(boundary_err, std::abs(0.5 * (lo + hi) - threshold_p_fixed(p)));
    }
    const double q1 = std::abs(semicircle_quantile_c(1.0));
    const bool ok = err1 < 1e-9 && std::abs(c0 - 1) < 1e-2 && monotone && boundary_err < 1e-9 && q1 < 1e-12;
    return Outcome{ok, fmt("|C1-16/(9pi^2)|=%.1e, C(1e-4)=%.4f, strictly monotone (decreasing) on 100 points: %s, "
                           "PSD boundary error %.1e for p=2..6, c(1)=%.1e",
                           err1, c0, monotone ? "yes" : "no", boundary_err, q1)};
  });

  criterion(10, "quantum-state primitives", 30, [] {
    std::vector<Complex> m(16, 0.0);
    for (int i : {0, 3})
      for (int j : {0, 3}) m[i * 4 + j] = 0.5;
    const HermitianMatrix bell(4, m);
    const double bell_min = hermitian_eigenvalues(partial_transpose(bell, BipartiteShape{2, 2})).smallest();
    const auto reduced = partial_trace(bell, 2, 2);
    const bool exact_half = reduced(0, 0) == Complex(0.5) && reduced(1, 1) == Complex(0.5) &&
                            reduced(0, 1) == Complex(0.0) && reduced(1, 0) == Complex(0.0);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const int d1 = 2 + k % 3, d2 = 2 + (k / 3) % 3;
      const auto rho = sample_induced_state(d1, d2, 1 + k % 7, RngStream{10, static_cast<std::uint64_t>(k)});
      const auto twice = partial_transpose(partial_transpose(rho), BipartiteShape{d1, d2});
      worst = std::max(worst, max_diff(twice, rho.matrix()));
    }
    const bool ok = std::abs(bell_min + 0.5) < 1e-12 && exact_half && worst < 1e-13;
    return Outcome{ok, fmt("Bell T2 min eigenvalue %.15f, tr_2 Bell = Id/2 exactly: %s, max |T2 T2 rho - rho| = %.1e",
                           bell_min, exact_half ? "yes" : "no", worst)};
  });

  criterion(11, "determinism of per-trial records", 60, [] {
    ExperimentConfig c;
    c.d1 = 2;
    c.d2 = 8;
    c.s_grid = {4.0 * 16, 30.0 * 16};
    c.trials = 40;
    c.seed = 11;
    c.threads = 1;
    const auto a = run_appt_scan(c);
    c.threads = 4;
    const auto b = run_appt_scan(c);
    ExperimentConfig m;
    m.d = 20;
    m.s = 60;
    m.p_list = {2, 3, 4};
    m.trials = 50;
    m.seed = 12;
    const auto ma = run_moments(m);
    const auto mb = run_moments(m);
    const bool ok = a.trials_dump() == b.trials_dump() && a.to_json()["aggregates"] == b.to_json()["aggregates"] &&
                    ma.trials_dump() == mb.trials_dump();
    return Outcome{ok, fmt("appt-scan (1 vs 4 threads) and moments reruns byte-identical: %s", ok ? "yes" : "no")};
  });

  std::printf("%d acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
