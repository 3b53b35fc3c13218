#include "rmtq/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rmtq {

MomentValue::MomentValue(int p, std::map<Key, std::uint64_t> coefficients)
    : p_(p), coefficients_(std::move(coefficients)) {}

std::uint64_t MomentValue::term_count() const {
  std::uint64_t n = 0;
  for (const auto& [key, count] : coefficients_) n += count;
  return n;
}

double MomentValue::evaluate(double d, double s) const {
  if (!(d > 0) || !(s > 0)) throw std::invalid_argument("MomentValue::evaluate: d and s must be positive");
  const long double inv_d2 = 1.0L / (static_cast<long double>(d) * d);
  const long double ratio = static_cast<long double>(d) / s;
  long double total = 0;
  for (const auto& [key, count] : coefficients_) {
    const auto [g, k] = key;
    total += static_cast<long double>(count) * std::pow(inv_d2, g) * std::pow(ratio, k / 2.0L);
  }
  return static_cast<double>(total);
}

void to_json(nlohmann::json& j, const MomentValue& m) {
  auto terms = nlohmann::json::array();
  for (const auto& [key, count] : m.coefficients()) {
    terms.push_back({{"genus", key.first}, {"half_exponent", key.second}, {"count", count}});
  }
  j = nlohmann::json{{"p", m.p()}, {"terms", std::move(terms)}};
}

namespace {

// Cycle counting on a scratch buffer; avoids allocation in the hot loop.
class CycleCounter {
 public:
  explicit CycleCounter(int p) : seen_(p + 1) {}

  template <typename Map>
  int count(int p, Map&& next) {
    std::fill(seen_.begin(), seen_.end(), 0);
    int cycles = 0;
    for (int start = 1; start <= p; ++start) {
      if (seen_[start]) continue;
      ++cycles;
      for (int i = start; !seen_[i]; i = next(i)) seen_[i] = 1;
    }
    return cycles;
  }

 private:
  std::vector<char> seen_;
};

}  // namespace

MomentValue centered_wishart_moment_table(int p, int max_degree) {
  if (p < 1) throw std::invalid_argument("centered_wishart_moment: p must be >= 1");
  std::map<MomentValue::Key, std::uint64_t> table;
  CycleCounter counter(p);
  for_each_fixed_point_free(
      p,
      [&](const std::vector<int>& a) {
        const int cycles = counter.count(p, [&](int i) { return a[i - 1]; });
        // #(alpha^-1 gamma) = #(gamma^-1 alpha), and gamma^-1 alpha (i) = alpha(i) - 1 cyclically
        const int rest = counter.count(p, [&](int i) { return a[i - 1] == 1 ? p : a[i - 1] - 1; });
        const int len = p - cycles;
        const int g = (len + (p - rest) - p + 1) / 2;
        ++table[{g, 2 * len - p}];
      },
      max_degree);
  return MomentValue(p, std::move(table));
}

CenteredMoment centered_wishart_moment(int p, double d, double s, int max_degree) {
  if (!(d > 0) || !(s > 0)) throw std::invalid_argument("centered_wishart_moment: d and s must be positive");
  auto table = centered_wishart_moment_table(p, max_degree);
  const double value = table.evaluate(d, s);
  return {std::move(table), value};
}

double raw_wishart_moment(int p, double d, double s, int max_degree) {
  if (p < 1) throw std::invalid_argument("raw_wishart_moment: p must be >= 1");
  detail::check_degree(p, max_degree);
  // counts keyed by (#(alpha^-1 gamma), #alpha)
  std::vector<std::uint64_t> counts((p + 1) * (p + 1), 0);
  std::vector<int> a(p);
  std::iota(a.begin(), a.end(), 1);
  CycleCounter counter(p);
  do {
    const int cycles = counter.count(p, [&](int i) { return a[i - 1]; });
    const int rest = counter.count(p, [&](int i) { return a[i - 1] == 1 ? p : a[i - 1] - 1; });
    ++counts[rest * (p + 1) + cycles];
  } while (std::next_permutation(a.begin(), a.end()));

  long double total = 0;
  for (int r = 0; r <= p; ++r)
    for (int c = 0; c <= p; ++c) {
      const auto n = counts[r * (p + 1) + c];
      if (n != 0) total += static_cast<long double>(n) * std::pow(static_cast<long double>(d), r) *
                           std::pow(static_cast<long double>(s), c);
    }
  return static_cast<double>(total);
}

namespace {

void visit_pairings(std::vector<int>& images, int p, CycleCounter& counter, std::vector<std::uint64_t>& by_genus) {
  int first = 0;
  while (first < p && images[first] != 0) ++first;
  if (first == p) {
    const int rest = counter.count(p, [&](int i) { return images[i - 1] == 1 ? p : images[i - 1] - 1; });
    const int len = p / 2;
    const int g = (len + (p - rest) - p + 1) / 2;
    ++by_genus[g];
    return;
  }
  for (int partner = first + 1; partner < p; ++partner) {
    if (images[partner] != 0) continue;
    images[first] = partner + 1;
    images[partner] = first + 1;
    visit_pairings(images, p, counter, by_genus);
    images[first] = 0;
    images[partner] = 0;
  }
}

}  // namespace

std::uint64_t epsilon_count(int n, int g, int max_degree) {
  if (n < 1) throw std::invalid_argument("epsilon_count: n must be >= 1");
  if (g < 0) throw std::invalid_argument("epsilon_count: g must be >= 0");
  const int p = 2 * n;
  detail::check_degree(p, max_degree);
  std::vector<int> images(p, 0);
  std::vector<std::uint64_t> by_genus(n + 1, 0);
  CycleCounter counter(p);
  visit_pairings(images, p, counter, by_genus);
  return g < static_cast<int>(by_genus.size()) ? by_genus[g] : 0;
}

std::uint64_t catalan(int n) {
  if (n < 0) throw std::invalid_argument("catalan: negative index");
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

std::uint64_t double_factorial(int n) {
  std::uint64_t out = 1;
  for (int k = n; k > 1; k -= 2) out *= static_cast<std::uint64_t>(k);
  return out;
}

double limit_moment(int p, const LimitRegime& regime, int max_degree) {
  if (p < 1) throw std::invalid_argument("limit_moment: p must be >= 1");
  detail::check_degree(p, max_degree);
  struct Visitor {
    int p;
    int max_degree;
    double operator()(const regime::FixedDimension& r) const {
      if (!(r.d > 0)) throw std::invalid_argument("limit_moment: d must be positive");
      if (p % 2 != 0) return 0.0;
      long double total = 0;
      for (int g = 0; g <= p / 4 + 1; ++g) {
        total += static_cast<long double>(epsilon_count(p / 2, g, max_degree)) *
                 std::pow(static_cast<long double>(r.d), -2 * g);
      }
      return static_cast<double>(total);
    }
    double operator()(const regime::Ratio& r) const {
      if (!(r.c > 0)) throw std::invalid_argument("limit_moment: c must be positive");
      long double total = 0;
      for (const auto& pi : nc_partitions_without_singletons(p, max_degree)) {
        total += std::pow(static_cast<long double>(r.c), pi.block_count() - p / 2.0L);
      }
      return static_cast<double>(total);
    }
    double operator()(const regime::Semicircle&) const {
      return p % 2 != 0 ? 0.0 : static_cast<double>(catalan(p / 2));
    }
  };
  return std::visit(Visitor{p, max_degree}, regime);
}

}  // namespace rmtq
