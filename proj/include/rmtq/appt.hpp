#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmtq/linalg.hpp"

namespace rmtq {

/// A pair of bijections sigma_plus : S+ -> {1..p+} and sigma_minus : S- -> {1..p-}
/// with S+ = {(k,l) : 1 <= k <= l <= p} and S- = {(k,l) : 1 <= k < l <= p}.
///
/// Both maps are stored as vectors indexed by the row-major position of
/// (k, l) in S+ (resp. S-).
class OrderingPair {
 public:
  /// Throws std::invalid_argument unless both vectors are bijections onto
  /// {1..p+} and {1..p-}.
  OrderingPair(int p, std::vector<int> sigma_plus, std::vector<int> sigma_minus);

  /// Both maps enumerate their domain in row-major order.
  static OrderingPair canonical(int p);

  int p() const { return p_; }
  int plus(int k, int l) const;   // 1 <= k <= l <= p
  int minus(int k, int l) const;  // 1 <= k < l <= p
  const std::vector<int>& sigma_plus() const { return plus_; }
  const std::vector<int>& sigma_minus() const { return minus_; }

  friend bool operator==(const OrderingPair&, const OrderingPair&) = default;

 private:
  int p_;
  std::vector<int> plus_;
  std::vector<int> minus_;
};

void to_json(nlohmann::json& j, const OrderingPair& pair);

inline int p_plus(int p) { return p * (p + 1) / 2; }
inline int p_minus(int p) { return p * (p - 1) / 2; }

/// Small dense real square matrix, row-major.
struct RealSquareMatrix {
  int n = 0;
  std::vector<double> entries;
  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

/// Lambda_{k,l} = lambda_{d+1-sigma_plus(k,l)} for k <= l and
/// -lambda_{sigma_minus(l,k)} for k > l (1-based). Requires d >= p+.
RealSquareMatrix build_lambda(const Spectrum& lambda, const OrderingPair& pair);

/// Theta = Lambda + Lambda^T. Off-diagonal entries are <= 0 for any sorted
/// spectrum.
HermitianMatrix build_theta(const Spectrum& lambda, const OrderingPair& pair);

/// Every ordering pair for p in {2, 3}: 6 pairs for p = 2 and 4320 for p = 3.
/// Throws std::invalid_argument for p >= 4 (10! * 6! pairs) and p < 2.
std::vector<OrderingPair> enumerate_ordering_pairs(int p);

/// Clips entries in [-1e-10, 0) to zero and rescales to unit trace. Throws
/// std::invalid_argument for more negative entries or a trace more than
/// 1e-10 away from 1.
Spectrum validate_state_spectrum(const Spectrum& lambda);

struct ExactCheck {
  bool absolutely_ppt;
  double min_eigenvalue;        // smallest eigenvalue over all Theta matrices
  OrderingPair witness;         // pair attaining min_eigenvalue
  std::size_t distinct_thetas;  // matrices left after deduplication
};

/// Exhaustive test: every Theta(lambda; pair) must be positive semidefinite.
/// Theta matrices that coincide up to a simultaneous row/column permutation
/// are evaluated once. tol defaults to 1e-10 * ||Theta|| per matrix.
ExactCheck appt_exact_details(const Spectrum& lambda, int p, std::optional<double> tol = std::nullopt);
bool appt_exact_small_p(const Spectrum& lambda, int p, std::optional<double> tol = std::nullopt);

struct NecessaryCheck {
  bool failed;   // true certifies "not absolutely PPT"
  double value;  // x^T Lambda x for x the all-ones vector
};

/// sum_{i<=p+} lambda_{d+1-i} - sum_{i<=p-} lambda_i. The value is the same for
/// every ordering pair; a negative value rules out absolute PPT.
NecessaryCheck appt_necessary_all_ones(const Spectrum& lambda, int p);

struct SufficientCheck {
  bool certified;
  double delta;   // max(lambda_1 - 1/d, 1/d - lambda_d)
  double margin;  // 1/(p d) - delta
};

/// Certifies absolute PPT when delta <= 1/(p d): each entry of
/// Theta - (2/d) Id is bounded by 2 delta, so ||Theta - (2/d) Id|| <= 2 p delta.
/// Assumes a unit-trace spectrum of dimension d.
SufficientCheck appt_sufficient_norm_bound(const Spectrum& lambda, int d, int p);

/// Closed-form two-qubit-type criterion for p = 2:
/// lambda_1 <= lambda_{d-1} + 2 sqrt(lambda_{d-2} lambda_d). Returns the
/// margin (right side minus left side).
double appt_closed_form_p2_margin(const Spectrum& lambda);

enum class Verdict { AbsolutelyPPT, NotAbsolutelyPPT, Unknown };
enum class Evidence { SufficientNormBound, ExactEnumeration, NecessaryAllOnes, None };

std::string to_string(Verdict v);
std::string to_string(Evidence e);

struct ApptVerdict {
  Verdict verdict;
  Evidence test;
  double margin;  // norm-bound margin, min Theta eigenvalue, or all-ones value
  int p;
  int d;
  std::optional<OrderingPair> witness;  // set for negative verdicts
  double sufficient_margin;
  std::optional<double> necessary_value;
};

void to_json(nlohmann::json& j, const ApptVerdict& v);

/// Runs the sufficient bound, then exhaustive enumeration when p <= 3, then
/// the all-ones test, and returns the first conclusive answer. Only p >= 4
/// can end in Unknown.
ApptVerdict appt_verdict(const Spectrum& lambda, int d1, int d2, std::optional<double> tol = std::nullopt);

}  // namespace rmtq
