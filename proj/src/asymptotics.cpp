#include "rmtq/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmtq {

namespace {

using std::numbers::pi;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  // split once so that symmetric integrands cannot fool the first estimate
  const double m = 0.5 * (a + b);
  double total = 0;
  for (auto [lo, hi] : {std::pair{a, m}, std::pair{m, b}}) {
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(f, lo, hi, fa, fm, fb, whole, 0.5 * tol, max_depth);
  }
  return total;
}

double semicircle_density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * pi);
}

double mp_density(double x, double c) {
  if (!(c > 0)) throw std::invalid_argument("mp_density: c must be positive");
  const double lo = (std::sqrt(c) - 1.0) * (std::sqrt(c) - 1.0);
  const double hi = (std::sqrt(c) + 1.0) * (std::sqrt(c) + 1.0);
  if (x <= lo || x >= hi || x <= 0.0) return 0.0;
  const double r = 4.0 * c - (x - 1.0 - c) * (x - 1.0 - c);
  return r <= 0.0 ? 0.0 : std::sqrt(r) / (2.0 * pi * x);
}

double mp_atom_mass(double c) {
  if (!(c > 0)) throw std::invalid_argument("mp_atom_mass: c must be positive");
  return std::max(1.0 - c, 0.0);
}

std::pair<double, double> mp_edges(double c) {
  if (!(c > 0)) throw std::invalid_argument("mp_edges: c must be positive");
  const double root = std::sqrt(c);
  const double a = c <= 1.0 ? 0.0 : (root - 1.0) * (root - 1.0);
  return {a, (root + 1.0) * (root + 1.0)};
}

SpectralDensity SpectralDensity::semicircle() { return SpectralDensity(true, 0.0, -2.0, 2.0); }

SpectralDensity SpectralDensity::marchenko_pastur(double c) {
  if (!(c > 0)) throw std::invalid_argument("SpectralDensity: c must be positive");
  const double root = std::sqrt(c);
  return SpectralDensity(false, c, (root - 1.0) * (root - 1.0), (root + 1.0) * (root + 1.0));
}

double SpectralDensity::density(double x) const { return semicircle_ ? semicircle_density(x) : mp_density(x, c_); }

double SpectralDensity::cdf(double x) const {
  const double atom = atom_mass();
  double total = x >= 0.0 ? atom : 0.0;
  if (x <= lower_) return total;
  const double a = lower_;
  const double b = upper_;
  const double half = 0.5 * (b - a);
  const double theta_end = x >= b ? pi : std::acos(1.0 - (x - a) / half);
  // sqrt((x-a)(b-x)) = half * sin(t) and dx = half * sin(t) dt
  std::function<double(double)> integrand;
  if (semicircle_) {
    integrand = [half](double t) { return half * half * std::sin(t) * std::sin(t) / (2.0 * pi); };
  } else if (a == 0.0) {
    // x(t) = b (1 - cos t) / 2, and sin^2 t / (1 - cos t) = 1 + cos t
    integrand = [b](double t) { return b * (1.0 + std::cos(t)) / (4.0 * pi); };
  } else {
    integrand = [a, half](double t) {
      const double s = std::sin(t);
      const double xt = a + half * (1.0 - std::cos(t));
      return half * half * s * s / (2.0 * pi * xt);
    };
  }
  total += adaptive_simpson(integrand, 0.0, theta_end, 1e-13);
  return total;
}

double ks_distance(std::span<const double> samples, const SpectralDensity& law) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = law.cdf(sorted[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return worst;
}

namespace {

double semicircle_cdf_closed(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * pi) + std::asin(0.5 * x) / pi;
}

double first_moment_antiderivative(double x) {
  const double r = std::max(0.0, 4.0 - x * x);
  return -r * std::sqrt(r) / (6.0 * pi);
}

void require_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in (0, 1]; got " + std::to_string(tau));
  }
}

}  // namespace

double semicircle_tail_mass(double c) { return 1.0 - semicircle_cdf_closed(c); }

double semicircle_first_moment(double a, double b) {
  a = std::clamp(a, -2.0, 2.0);
  b = std::clamp(b, -2.0, 2.0);
  return first_moment_antiderivative(b) - first_moment_antiderivative(a);
}

double semicircle_quantile_c(double tau) {
  require_tau(tau);
  double lo = 0.0, hi = 2.0;
  const double target = 0.5 * tau;
  // tail mass decreases from 1/2 at c = 0 to 0 at c = 2
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (semicircle_tail_mass(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double c_tau(double tau) {
  const double c = semicircle_quantile_c(tau);
  // x = 2 cos(phi): x w(x) dx = (4/pi) cos(phi) sin^2(phi) dphi
  const double phi_end = std::acos(std::clamp(0.5 * c, -1.0, 1.0));
  const double integral = adaptive_simpson(
      [](double phi) {
        const double s = std::sin(phi);
        return 4.0 / pi * std::cos(phi) * s * s;
      },
      0.0, phi_end, 1e-14);
  const double ratio = integral / tau;
  return ratio * ratio;
}

double c_tau_closed_form(double tau) {
  const double c = semicircle_quantile_c(tau);
  const double ratio = semicircle_first_moment(c, 2.0) / tau;
  return ratio * ratio;
}

double threshold_p_fixed(int p) {
  if (p < 2) throw std::invalid_argument("threshold_p_fixed: p must be >= 2");
  const double root = p + std::sqrt(static_cast<double>(p) * p - 1.0);
  return root * root;
}

LimitMatrix lambda_c_limit_matrix(double c, int d1) {
  if (!(c > 0)) throw std::invalid_argument("lambda_c_limit_matrix: c must be positive");
  if (d1 < 2) throw std::invalid_argument("lambda_c_limit_matrix: d1 must be >= 2");
  const auto [a, b] = mp_edges(c);
  std::vector<double> m(static_cast<std::size_t>(d1) * d1, a - b);
  for (int i = 0; i < d1; ++i) m[i * d1 + i] = 2.0 * a;
  return {HermitianMatrix::from_real(d1, m), (a + b) + d1 * (a - b), a + b};
}

ThresholdScale threshold_scale_s0(int d1, int d2) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("threshold_scale_s0: d1 and d2 must be >= 2");
  const double p = std::min(d1, d2);
  const double d = static_cast<double>(d1) * d2;
  const double tau = std::clamp(p * p / d, std::numeric_limits<double>::min(), 1.0);
  return {p * p * d, tau, 4.0 * c_tau(tau), 4.0};
}

}  // namespace rmtq
