#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rmtq {

/// Largest degree for which exhaustive enumeration is allowed by default.
/// 12! is about 4.8e8, which is the practical ceiling.
inline constexpr int kDefaultMaxDegree = 12;

/// Permutation of [p] = {1, ..., p} in one-line notation.
///
/// Semantics are 1-based: `(*this)(i)` is the image of i for 1 <= i <= p.
/// The empty permutation (p = 0) is valid and has length 0.
class Permutation {
 public:
  Permutation() = default;

  /// Takes 1-based images; throws std::invalid_argument unless they form a
  /// bijection of {1, ..., p}.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int p);

  /// The forward cycle (1 2 ... p).
  static Permutation full_cycle(int p);

  /// Builds a permutation of [p] from disjoint cycles, e.g. {{1, 3}, {2, 4}}.
  /// Points not mentioned are fixed.
  static Permutation from_cycles(int p, const std::vector<std::vector<int>>& cycles);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const;

  /// Composition, (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;

  /// Cycle notation, e.g. "(1 3)(2 4)"; fixed points omitted, "()" for identity.
  std::string to_string() const;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> images, Unchecked) : images_(std::move(images)) {}

  std::vector<int> images_;
};

/// Number of cycles #alpha, fixed points included.
int cycle_count(const Permutation& alpha);

/// Minimal number of transpositions, |alpha| = p - #alpha.
int length(const Permutation& alpha);

/// g(alpha) = (|alpha| + |alpha^-1 gamma| - p + 1) / 2 with gamma the full
/// increasing cycle. Throws std::invalid_argument for p = 0.
int genus(const Permutation& alpha);

struct StrippedPermutation {
  Permutation permutation;  // fixed-point free, relabeled onto [|support|]
  std::vector<int> support;  // original points, increasing
};

/// Removes fixed points and relabels the remaining support increasingly.
/// Length and genus are unchanged; the identity maps to the empty permutation.
StrippedPermutation strip_fixed_points(const Permutation& alpha);

namespace detail {

void check_degree(int p, int max_degree);

template <typename Visitor>
void visit_derangements(std::vector<int>& images, std::vector<bool>& used, int pos, Visitor& visit) {
  const int p = static_cast<int>(images.size());
  if (pos == p) {
    visit(static_cast<const std::vector<int>&>(images));
    return;
  }
  for (int v = 1; v <= p; ++v) {
    if (used[v] || v == pos + 1) continue;
    used[v] = true;
    images[pos] = v;
    visit_derangements(images, used, pos + 1, visit);
    used[v] = false;
  }
}

}  // namespace detail

/// Calls `visit(images)` once for every fixed-point-free permutation of [p],
/// with `images` the 1-based one-line vector. The count is the derangement
/// number D_p. Throws std::invalid_argument when p > max_degree.
template <typename Visitor>
void for_each_fixed_point_free(int p, Visitor&& visit, int max_degree = kDefaultMaxDegree) {
  detail::check_degree(p, max_degree);
  std::vector<int> images(p);
  std::vector<bool> used(p + 1, false);
  detail::visit_derangements(images, used, 0, visit);
}

std::vector<Permutation> fixed_point_free_permutations(int p, int max_degree = kDefaultMaxDegree);

/// Set partition of [p]; blocks are sorted internally and ordered by their
/// smallest element.
class SetPartition {
 public:
  /// Throws std::invalid_argument unless the blocks are non-empty, disjoint
  /// and cover [p].
  SetPartition(int p, std::vector<std::vector<int>> blocks);

  int size() const { return p_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  bool has_singleton() const;

  /// Crossing iff a < b < c < d exist with a, c in one block and b, d in
  /// another.
  bool is_noncrossing() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  int p_ = 0;
  std::vector<std::vector<int>> blocks_;
};

/// All non-crossing partitions of [p] without singletons. Their number is the
/// Riordan number R_p. p = 0 yields the single empty partition.
std::vector<SetPartition> nc_partitions_without_singletons(int p, int max_degree = kDefaultMaxDegree);

}  // namespace rmtq
