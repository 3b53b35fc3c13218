#pragma once

#include <functional>
#include <span>
#include <utility>

#include "rmtq/linalg.hpp"

namespace rmtq {

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 50);

/// Standard semicircle density sqrt(4 - x^2) / (2 pi) on [-2, 2], zero outside.
double semicircle_density(double x);

/// Continuous part of the Marchenko-Pastur law pi_c:
/// sqrt(4c - (x - 1 - c)^2) / (2 pi x) on [(sqrt c - 1)^2, (sqrt c + 1)^2].
double mp_density(double x, double c);

/// Mass of the atom at 0, max(1 - c, 0).
double mp_atom_mass(double c);

/// (a_c, b_c): a_c = 0 for c <= 1 and (sqrt c - 1)^2 otherwise; b_c = (sqrt c + 1)^2.
std::pair<double, double> mp_edges(double c);

/// Limiting spectral law: standard semicircle or Marchenko-Pastur pi_c.
class SpectralDensity {
 public:
  static SpectralDensity semicircle();
  static SpectralDensity marchenko_pastur(double c);

  bool is_semicircle() const { return semicircle_; }
  double parameter() const { return c_; }
  double lower_edge() const { return lower_; }
  double upper_edge() const { return upper_; }
  double atom_mass() const { return semicircle_ ? 0.0 : mp_atom_mass(c_); }

  double density(double x) const;

  /// Mass of (-inf, x], atom included. Uses quadrature in the angle
  /// variable x = a + (b - a)(1 - cos t)/2, which removes the square-root
  /// edge singularities.
  double cdf(double x) const;

  /// Total mass including the atom; 1 up to quadrature error.
  double total_mass() const { return cdf(upper_ + 1.0); }

 private:
  SpectralDensity(bool semicircle, double c, double lower, double upper)
      : semicircle_(semicircle), c_(c), lower_(lower), upper_(upper) {}
  bool semicircle_;
  double c_;
  double lower_;
  double upper_;
};

/// Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)| between the empirical
/// distribution of `samples` and `law`.
double ks_distance(std::span<const double> samples, const SpectralDensity& law);

/// int_c^2 w(x) dx in closed form.
double semicircle_tail_mass(double c);

/// int_a^b x w(x) dx in closed form, from the antiderivative -(4 - x^2)^{3/2} / (6 pi).
double semicircle_first_moment(double a, double b);

/// c_{tau/2} in [0, 2] with int_{c}^2 w = tau / 2, by bisection to 1e-12.
/// Throws std::invalid_argument for tau outside (0, 1].
double semicircle_quantile_c(double tau);

/// C_tau = (int_{c_{tau/2}}^2 x w(x) dx / tau)^2 with the integral by adaptive
/// quadrature.
double c_tau(double tau);

/// Same constant with the integral evaluated from the antiderivative.
double c_tau_closed_form(double tau);

/// (p + sqrt(p^2 - 1))^2, the environment ratio s/d at which induced states
/// with bounded factor p become absolutely PPT. Throws for p < 2.
double threshold_p_fixed(int p);

struct LimitMatrix {
  HermitianMatrix matrix;  // (a_c + b_c) Id + (a_c - b_c) J on C^d1
  double simple_eigenvalue;    // (a_c + b_c) + d1 (a_c - b_c), multiplicity 1
  double repeated_eigenvalue;  // a_c + b_c, multiplicity d1 - 1
};

/// Common limit of all Theta matrices of a Wishart spectrum with s/d -> c.
LimitMatrix lambda_c_limit_matrix(double c, int d1);

struct ThresholdScale {
  double s0;              // p^2 d with p = min(d1, d2), d = d1 d2
  double tau;             // p^2 / d, clamped to (0, 1]
  double lower_constant;  // 4 C_tau
  double upper_constant;  // 4
};

ThresholdScale threshold_scale_s0(int d1, int d2);

}  // namespace rmtq
