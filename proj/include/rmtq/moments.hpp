#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <variant>

#include "json.hpp"
#include "rmtq/permutation.hpp"

namespace rmtq {

/// Exact moment of the centered Wishart matrix as an integer coefficient
/// table over the two scale variables d^-2 and d/s:
///
///   m_p = sum_{(g, k)} count(g, k) * d^(-2g) * (d/s)^(k/2)
///
/// where k = 2|alpha| - p is the doubled exponent (half-integer for odd p).
class MomentValue {
 public:
  using Key = std::pair<int, int>;  // (genus, doubled exponent of d/s)

  MomentValue(int p, std::map<Key, std::uint64_t> coefficients);

  int p() const { return p_; }
  const std::map<Key, std::uint64_t>& coefficients() const { return coefficients_; }

  /// Number of permutations summed over (D_p for the centered moment).
  std::uint64_t term_count() const;

  /// Evaluates the table at concrete (d, s), accumulating in long double.
  double evaluate(double d, double s) const;

  friend bool operator==(const MomentValue&, const MomentValue&) = default;

 private:
  int p_;
  std::map<Key, std::uint64_t> coefficients_;
};

/// {"p": p, "terms": [{"genus": g, "half_exponent": k, "count": n}, ...]}
void to_json(nlohmann::json& j, const MomentValue& m);

/// Coefficient table of E (1/d) tr Z_d^p, summed over fixed-point-free
/// permutations of [p]. Independent of (d, s).
MomentValue centered_wishart_moment_table(int p, int max_degree = kDefaultMaxDegree);

struct CenteredMoment {
  MomentValue table;
  double value;
};

/// m_p(d, s) = E (1/d) tr Z_d^p with Z_d = sqrt(ds) (W/(ds) - Id/d).
/// d and s may be any positive reals.
CenteredMoment centered_wishart_moment(int p, double d, double s, int max_degree = kDefaultMaxDegree);

/// E tr W^p = sum_{alpha in S_p} d^#(alpha^-1 gamma) s^#alpha.
double raw_wishart_moment(int p, double d, double s, int max_degree = kDefaultMaxDegree);

/// Number of products of n disjoint transpositions in S_2n with genus g.
std::uint64_t epsilon_count(int n, int g, int max_degree = kDefaultMaxDegree);

std::uint64_t catalan(int n);
std::uint64_t double_factorial(int n);

namespace regime {
struct FixedDimension {
  double d;
};  // s -> infinity, d fixed
struct Ratio {
  double c;
};  // s/d -> c
struct Semicircle {};  // 1 << d << s
}  // namespace regime

using LimitRegime = std::variant<regime::FixedDimension, regime::Ratio, regime::Semicircle>;

/// Limit of m_p in one of the three asymptotic regimes.
double limit_moment(int p, const LimitRegime& regime, int max_degree = kDefaultMaxDegree);

}  // namespace rmtq
