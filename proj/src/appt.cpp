#include "rmtq/appt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rmtq {

namespace {

int plus_index(int p, int k, int l) {
  // row-major position of (k, l), k <= l, in S+
  return (k - 1) * p - (k - 1) * (k - 2) / 2 + (l - k);
}

int minus_index(int p, int k, int l) {
  // row-major position of (k, l), k < l, in S-
  return (k - 1) * (p - 1) - (k - 1) * (k - 2) / 2 + (l - k - 1);
}

bool is_bijection_onto(const std::vector<int>& v, int n) {
  if (static_cast<int>(v.size()) != n) return false;
  std::vector<bool> seen(n + 1, false);
  for (int x : v) {
    if (x < 1 || x > n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

OrderingPair::OrderingPair(int p, std::vector<int> sigma_plus, std::vector<int> sigma_minus)
    : p_(p), plus_(std::move(sigma_plus)), minus_(std::move(sigma_minus)) {
  if (p < 1) throw std::invalid_argument("OrderingPair: p must be >= 1");
  if (!is_bijection_onto(plus_, p_plus(p)) || !is_bijection_onto(minus_, p_minus(p))) {
    throw std::invalid_argument("OrderingPair: orderings must be bijections onto {1..p+} and {1..p-}");
  }
}

OrderingPair OrderingPair::canonical(int p) {
  std::vector<int> plus(p_plus(p)), minus(p_minus(p));
  std::iota(plus.begin(), plus.end(), 1);
  std::iota(minus.begin(), minus.end(), 1);
  return OrderingPair(p, std::move(plus), std::move(minus));
}

int OrderingPair::plus(int k, int l) const { return plus_[plus_index(p_, k, l)]; }
int OrderingPair::minus(int k, int l) const { return minus_[minus_index(p_, k, l)]; }

void to_json(nlohmann::json& j, const OrderingPair& pair) {
  j = nlohmann::json{{"p", pair.p()}, {"sigma_plus", pair.sigma_plus()}, {"sigma_minus", pair.sigma_minus()}};
}

namespace {

void require_room(const Spectrum& lambda, int p) {
  if (p < 1) throw std::invalid_argument("appt: p must be >= 1");
  if (lambda.size() < p_plus(p)) {
    throw std::invalid_argument("appt: spectrum dimension " + std::to_string(lambda.size()) +
                                " is smaller than p(p+1)/2 = " + std::to_string(p_plus(p)));
  }
}

}  // namespace

RealSquareMatrix build_lambda(const Spectrum& lambda, const OrderingPair& pair) {
  const int p = pair.p();
  require_room(lambda, p);
  const int d = lambda.size();
  RealSquareMatrix out{p, std::vector<double>(static_cast<std::size_t>(p) * p)};
  for (int k = 1; k <= p; ++k)
    for (int l = 1; l <= p; ++l) {
      out.entries[(k - 1) * p + (l - 1)] = k <= l ? lambda(d + 1 - pair.plus(k, l)) : -lambda(pair.minus(l, k));
    }
  return out;
}

HermitianMatrix build_theta(const Spectrum& lambda, const OrderingPair& pair) {
  const RealSquareMatrix l = build_lambda(lambda, pair);
  const int p = l.n;
  std::vector<double> theta(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) theta[i * p + j] = l(i, j) + l(j, i);
  return HermitianMatrix::from_real(p, theta);
}

std::vector<OrderingPair> enumerate_ordering_pairs(int p) {
  if (p < 2) throw std::invalid_argument("enumerate_ordering_pairs: p must be >= 2");
  if (p > 3) {
    throw std::invalid_argument("enumerate_ordering_pairs: p = " + std::to_string(p) +
                                " gives (p(p+1)/2)! * (p(p-1)/2)! pairs; use the all-ones and norm-bound tests");
  }
  std::vector<int> plus(p_plus(p)), minus(p_minus(p));
  std::iota(plus.begin(), plus.end(), 1);
  std::vector<OrderingPair> out;
  do {
    std::iota(minus.begin(), minus.end(), 1);
    do {
      out.emplace_back(p, plus, minus);
    } while (std::next_permutation(minus.begin(), minus.end()));
  } while (std::next_permutation(plus.begin(), plus.end()));
  return out;
}

Spectrum validate_state_spectrum(const Spectrum& lambda) {
  std::vector<double> v(lambda.values().begin(), lambda.values().end());
  for (double& x : v) {
    if (x < -1e-10) throw std::invalid_argument("spectrum has a negative entry " + std::to_string(x));
    if (x < 0) x = 0;
  }
  double total = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) total += *it;
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("spectrum does not sum to 1 (sum = " + std::to_string(total) + ")");
  }
  for (double& x : v) x /= total;
  return Spectrum(std::move(v));
}

namespace {

// Theta for a pair depends on the spectrum only through which eigenvalue
// ranks land where: diagonal k uses lambda_{d+1-plus(k,k)}, and entry (k,l),
// k < l, uses lambda_{d+1-plus(k,l)} - lambda_{minus(k,l)}.
struct ThetaTemplate {
  std::vector<int> key;  // diag ranks followed by (plus, minus) for k < l
  OrderingPair representative;
};

std::vector<int> template_key(const OrderingPair& pair, const std::vector<int>& relabel) {
  // relabel maps new index -> old index
  const int p = pair.p();
  std::vector<int> key;
  for (int k = 1; k <= p; ++k) key.push_back(pair.plus(relabel[k - 1], relabel[k - 1]));
  for (int k = 1; k <= p; ++k)
    for (int l = k + 1; l <= p; ++l) {
      const int a = std::min(relabel[k - 1], relabel[l - 1]);
      const int b = std::max(relabel[k - 1], relabel[l - 1]);
      key.push_back(pair.plus(a, b));
      key.push_back(pair.minus(a, b));
    }
  return key;
}

std::vector<ThetaTemplate> build_templates(int p) {
  std::map<std::vector<int>, OrderingPair> unique;
  std::vector<int> relabel(p);
  for (const auto& pair : enumerate_ordering_pairs(p)) {
    std::iota(relabel.begin(), relabel.end(), 1);
    std::vector<int> best;
    do {
      auto key = template_key(pair, relabel);
      if (best.empty() || key < best) best = std::move(key);
    } while (std::next_permutation(relabel.begin(), relabel.end()));
    unique.try_emplace(std::move(best), pair);
  }
  std::vector<ThetaTemplate> out;
  out.reserve(unique.size());
  for (auto& [key, pair] : unique) out.push_back({key, pair});
  return out;
}

const std::vector<ThetaTemplate>& templates_for(int p) {
  static const std::vector<ThetaTemplate> two = build_templates(2);
  static const std::vector<ThetaTemplate> three = build_templates(3);
  if (p == 2) return two;
  if (p == 3) return three;
  throw std::invalid_argument("appt_exact_small_p: exhaustive enumeration is limited to p in {2, 3}; got p = " +
                              std::to_string(p));
}

}  // namespace

ExactCheck appt_exact_details(const Spectrum& raw, int p, std::optional<double> tol) {
  const auto& templates = templates_for(p);
  const Spectrum lambda = validate_state_spectrum(raw);
  require_room(lambda, p);

  std::optional<ExactCheck> result;
  bool all_psd = true;
  for (const auto& t : templates) {
    const HermitianMatrix theta = build_theta(lambda, t.representative);
    const Spectrum eig = hermitian_eigenvalues(theta);
    const double norm = std::max(std::abs(eig.largest()), std::abs(eig.smallest()));
    const double threshold = tol.value_or(1e-10 * norm);
    if (eig.smallest() < -threshold) all_psd = false;
    if (!result || eig.smallest() < result->min_eigenvalue) {
      result = ExactCheck{false, eig.smallest(), t.representative, templates.size()};
    }
  }
  result->absolutely_ppt = all_psd;
  return *result;
}

bool appt_exact_small_p(const Spectrum& lambda, int p, std::optional<double> tol) {
  return appt_exact_details(lambda, p, tol).absolutely_ppt;
}

NecessaryCheck appt_necessary_all_ones(const Spectrum& lambda, int p) {
  require_room(lambda, p);
  const int d = lambda.size();
  double small = 0, large = 0;
  for (int i = 1; i <= p_plus(p); ++i) small += lambda(d + 1 - i);
  for (int i = 1; i <= p_minus(p); ++i) large += lambda(i);
  const double value = small - large;
  return {value < 0, value};
}

SufficientCheck appt_sufficient_norm_bound(const Spectrum& lambda, int d, int p) {
  if (lambda.size() != d) throw std::invalid_argument("appt_sufficient_norm_bound: spectrum size differs from d");
  if (p < 1) throw std::invalid_argument("appt_sufficient_norm_bound: p must be >= 1");
  const double mean = 1.0 / d;
  const double delta = std::max(lambda.largest() - mean, mean - lambda.smallest());
  const double bound = 1.0 / (static_cast<double>(p) * d);
  // a few ulps of slack so that delta == 1/(pd) computed in floating point
  // still lands on the certified side
  const bool certified = delta <= bound * (1.0 + 8 * std::numeric_limits<double>::epsilon());
  return {certified, delta, bound - delta};
}

double appt_closed_form_p2_margin(const Spectrum& lambda) {
  const int d = lambda.size();
  if (d < 3) throw std::invalid_argument("appt_closed_form_p2_margin: needs d >= 3");
  return lambda(d - 1) + 2.0 * std::sqrt(std::max(0.0, lambda(d - 2)) * std::max(0.0, lambda(d))) - lambda(1);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::AbsolutelyPPT:
      return "AbsolutelyPPT";
    case Verdict::NotAbsolutelyPPT:
      return "NotAbsolutelyPPT";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(Evidence e) {
  switch (e) {
    case Evidence::SufficientNormBound:
      return "sufficient_norm_bound";
    case Evidence::ExactEnumeration:
      return "exact";
    case Evidence::NecessaryAllOnes:
      return "necessary_all_ones";
    case Evidence::None:
      return "none";
  }
  return "none";
}

void to_json(nlohmann::json& j, const ApptVerdict& v) {
  j = nlohmann::json{{"verdict", to_string(v.verdict)},
                     {"test", to_string(v.test)},
                     {"margin", v.margin},
                     {"p", v.p},
                     {"d", v.d}};
  if (v.witness) j["witness"] = *v.witness;
  if (v.verdict == Verdict::Unknown) {
    j["sufficient_margin"] = v.sufficient_margin;
    j["necessary_value"] = v.necessary_value.value_or(0.0);
  }
}

ApptVerdict appt_verdict(const Spectrum& raw, int d1, int d2, std::optional<double> tol) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("appt_verdict: d1 and d2 must be >= 2");
  const int d = d1 * d2;
  if (raw.size() != d) throw std::invalid_argument("appt_verdict: spectrum size differs from d1 * d2");
  const Spectrum lambda = validate_state_spectrum(raw);
  const int p = std::min(d1, d2);

  ApptVerdict out{Verdict::Unknown, Evidence::None, 0.0, p, d, std::nullopt, 0.0, std::nullopt};
  const auto sufficient = appt_sufficient_norm_bound(lambda, d, p);
  out.sufficient_margin = sufficient.margin;
  if (sufficient.certified) {
    out.verdict = Verdict::AbsolutelyPPT;
    out.test = Evidence::SufficientNormBound;
    out.margin = sufficient.margin;
    return out;
  }
  if (p <= 3) {
    const auto exact = appt_exact_details(lambda, p, tol);
    out.test = Evidence::ExactEnumeration;
    out.margin = exact.min_eigenvalue;
    if (exact.absolutely_ppt) {
      out.verdict = Verdict::AbsolutelyPPT;
    } else {
      out.verdict = Verdict::NotAbsolutelyPPT;
      out.witness = exact.witness;
    }
    return out;
  }
  const auto necessary = appt_necessary_all_ones(lambda, p);
  out.necessary_value = necessary.value;
  if (necessary.failed) {
    out.verdict = Verdict::NotAbsolutelyPPT;
    out.test = Evidence::NecessaryAllOnes;
    out.margin = necessary.value;
    out.witness = OrderingPair::canonical(p);
    return out;
  }
  out.margin = necessary.value;
  return out;
}

}  // namespace rmtq
