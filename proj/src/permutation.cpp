#include "rmtq/permutation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rmtq {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int p = size();
  std::vector<bool> seen(p + 1, false);
  for (int v : images_) {
    if (v < 1 || v > p || seen[v]) {
      throw std::invalid_argument("Permutation: images are not a bijection of [p]");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int p) {
  if (p < 0) throw std::invalid_argument("Permutation: negative degree");
  std::vector<int> images(p);
  for (int i = 0; i < p; ++i) images[i] = i + 1;
  return Permutation(std::move(images), Unchecked{});
}

Permutation Permutation::full_cycle(int p) {
  if (p < 0) throw std::invalid_argument("Permutation: negative degree");
  std::vector<int> images(p);
  for (int i = 0; i < p; ++i) images[i] = (i + 1) % p + 1;
  return Permutation(std::move(images), Unchecked{});
}

Permutation Permutation::from_cycles(int p, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> images(p);
  for (int i = 0; i < p; ++i) images[i] = i + 1;
  std::vector<bool> touched(p + 1, false);
  for (const auto& cycle : cycles) {
    const auto n = cycle.size();
    for (std::size_t k = 0; k < n; ++k) {
      const int from = cycle[k];
      if (from < 1 || from > p || touched[from]) {
        throw std::invalid_argument("Permutation::from_cycles: cycles are not disjoint subsets of [p]");
      }
      touched[from] = true;
      images[from - 1] = cycle[(k + 1) % n];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[images_[i] - 1] = i + 1;
  return Permutation(std::move(inv), Unchecked{});
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Permutation: degree mismatch in composition");
  std::vector<int> out(a.images_.size());
  for (int i = 0; i < a.size(); ++i) out[i] = a.images_[b.images_[i] - 1];
  return Permutation(std::move(out), Permutation::Unchecked{});
}

std::string Permutation::to_string() const {
  std::string out;
  std::vector<bool> seen(images_.size() + 1, false);
  for (int start = 1; start <= size(); ++start) {
    if (seen[start] || (*this)(start) == start) continue;
    out += '(';
    for (int i = start; !seen[i]; i = (*this)(i)) {
      seen[i] = true;
      if (i != start) out += ' ';
      out += std::to_string(i);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

namespace {

int count_cycles(std::span<const int> images) {
  const int p = static_cast<int>(images.size());
  std::vector<bool> seen(p + 1, false);
  int cycles = 0;
  for (int start = 1; start <= p; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (int i = start; !seen[i]; i = images[i - 1]) seen[i] = true;
  }
  return cycles;
}

}  // namespace

int cycle_count(const Permutation& alpha) { return count_cycles(alpha.images()); }

int length(const Permutation& alpha) { return alpha.size() - cycle_count(alpha); }

int genus(const Permutation& alpha) {
  const int p = alpha.size();
  if (p == 0) throw std::invalid_argument("genus: undefined for the empty permutation");
  const Permutation rest = alpha.inverse() * Permutation::full_cycle(p);
  const int twice = length(alpha) + length(rest) - p + 1;
  // the geodesic inequality makes twice >= 0 and even
  return twice / 2;
}

StrippedPermutation strip_fixed_points(const Permutation& alpha) {
  StrippedPermutation out;
  std::vector<int> relabel(alpha.size() + 1, 0);
  for (int i = 1; i <= alpha.size(); ++i) {
    if (alpha(i) != i) {
      out.support.push_back(i);
      relabel[i] = static_cast<int>(out.support.size());
    }
  }
  std::vector<int> images;
  images.reserve(out.support.size());
  for (int i : out.support) images.push_back(relabel[alpha(i)]);
  out.permutation = Permutation(std::move(images));
  return out;
}

namespace detail {

void check_degree(int p, int max_degree) {
  if (p < 0) throw std::invalid_argument("negative permutation degree");
  if (p > max_degree) {
    throw std::invalid_argument("degree " + std::to_string(p) + " exceeds the enumeration cap " +
                                std::to_string(max_degree) + " (the number of permutations grows as p!)");
  }
}

}  // namespace detail

std::vector<Permutation> fixed_point_free_permutations(int p, int max_degree) {
  std::vector<Permutation> out;
  for_each_fixed_point_free(
      p, [&](const std::vector<int>& images) { out.emplace_back(images); }, max_degree);
  return out;
}

SetPartition::SetPartition(int p, std::vector<std::vector<int>> blocks) : p_(p), blocks_(std::move(blocks)) {
  std::vector<bool> seen(p + 1, false);
  int covered = 0;
  for (auto& block : blocks_) {
    if (block.empty()) throw std::invalid_argument("SetPartition: empty block");
    std::sort(block.begin(), block.end());
    for (int v : block) {
      if (v < 1 || v > p || seen[v]) throw std::invalid_argument("SetPartition: blocks overlap or leave [p]");
      seen[v] = true;
      ++covered;
    }
  }
  if (covered != p) throw std::invalid_argument("SetPartition: blocks do not cover [p]");
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool SetPartition::has_singleton() const {
  return std::any_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 1; });
}

bool SetPartition::is_noncrossing() const {
  std::vector<int> owner(p_ + 1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (int v : blocks_[b]) owner[v] = static_cast<int>(b);
  }
  for (int a = 1; a <= p_; ++a)
    for (int b = a + 1; b <= p_; ++b) {
      if (owner[b] == owner[a]) continue;
      for (int c = b + 1; c <= p_; ++c) {
        if (owner[c] != owner[a]) continue;
        for (int d = c + 1; d <= p_; ++d) {
          if (owner[d] == owner[b]) return false;
        }
      }
    }
  return true;
}

namespace {

// Restricted growth strings enumerate every set partition exactly once.
void visit_growth_strings(std::vector<int>& rgs, int pos, int max_label, std::vector<SetPartition>& out) {
  const int p = static_cast<int>(rgs.size());
  if (pos == p) {
    std::vector<std::vector<int>> blocks(max_label + 1);
    for (int i = 0; i < p; ++i) blocks[rgs[i]].push_back(i + 1);
    for (const auto& b : blocks)
      if (b.size() < 2) return;
    SetPartition candidate(p, std::move(blocks));
    if (candidate.is_noncrossing()) out.push_back(std::move(candidate));
    return;
  }
  for (int label = 0; label <= max_label + 1; ++label) {
    rgs[pos] = label;
    visit_growth_strings(rgs, pos + 1, std::max(max_label, label), out);
  }
}

}  // namespace

std::vector<SetPartition> nc_partitions_without_singletons(int p, int max_degree) {
  detail::check_degree(p, max_degree);
  std::vector<SetPartition> out;
  if (p == 0) {
    out.emplace_back(0, std::vector<std::vector<int>>{});
    return out;
  }
  std::vector<int> rgs(p, 0);
  // first point always carries label 0
  visit_growth_strings(rgs, 1, 0, out);
  return out;
}

}  // namespace rmtq
