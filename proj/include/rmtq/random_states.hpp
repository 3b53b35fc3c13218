#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "rmtq/linalg.hpp"

namespace rmtq {

/// Identifies one reproducible random stream. Equal (seed, stream_id) pairs
/// yield bit-identical samples on one build; Monte Carlo drivers use the
/// trial index as stream_id.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Fresh engine positioned at the start of this stream.
  std::mt19937_64 engine() const;
};

/// Standard complex Gaussians: real and imaginary parts independent
/// N(0, 1/2), so E|z|^2 = 1.
class ComplexGaussianSource {
 public:
  explicit ComplexGaussianSource(const RngStream& stream) : engine_(stream.engine()) {}
  Complex operator()() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 0.70710678118654752440};
};

/// Bipartite shape d = d1 * d2 of C^d1 (x) C^d2.
struct BipartiteShape {
  int d1;
  int d2;
  int dimension() const { return d1 * d2; }
  int p() const { return d1 < d2 ? d1 : d2; }
};

/// Unit-trace positive semidefinite matrix, optionally shaped as a bipartite
/// state. The constructor checks trace and shape; positivity is guaranteed by
/// the samplers and can be verified with `check_positive`.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix matrix, std::optional<BipartiteShape> shape = std::nullopt);

  const HermitianMatrix& matrix() const { return matrix_; }
  int dimension() const { return matrix_.size(); }
  const std::optional<BipartiteShape>& shape() const { return shape_; }

  /// Throws std::invalid_argument if an eigenvalue is below -1e-10.
  void check_positive() const;

 private:
  HermitianMatrix matrix_;
  std::optional<BipartiteShape> shape_;
};

/// d x s Ginibre matrix with i.i.d. standard complex Gaussian entries.
ComplexRectMatrix sample_ginibre(int d, int s, const RngStream& rng);

/// W = G G* for a d x s Ginibre matrix G.
HermitianMatrix sample_wishart(int d, int s, const RngStream& rng);

/// Z = sqrt(ds) (W/(ds) - Id/d) = (W - s Id) / sqrt(ds).
HermitianMatrix centered_normalized(const HermitianMatrix& w, double d, double s);

/// rho = W / tr W on C^d1 (x) C^d2 with W a (d1 d2, s) Wishart matrix.
DensityMatrix sample_induced_state(int d1, int d2, int s, const RngStream& rng);

/// Partial trace over the environment of a uniform pure state on
/// C^d (x) C^s. Same law as sample_induced_state; used as its independent
/// counterpart in tests.
HermitianMatrix induced_state_by_purification(int d, int s, const RngStream& rng);

/// Traces out the second factor of a (d*s)-dimensional matrix, with the
/// composite index (i, b) stored at i * s + b:
///   sigma_ij = sum_b rho_{(i,b),(j,b)}.
HermitianMatrix partial_trace(const HermitianMatrix& rho, int d, int s);

/// Transpose on the second factor: ((i,a),(j,b)) -> ((i,b),(j,a)).
HermitianMatrix partial_transpose(const HermitianMatrix& rho, BipartiteShape shape);

/// Throws std::invalid_argument for an unshaped state.
HermitianMatrix partial_transpose(const DensityMatrix& rho);

bool is_ppt(const DensityMatrix& rho, std::optional<double> tol = std::nullopt);

/// (s - d) * log det rho, the induced-measure log-density without its
/// normalization constant. Requires s >= d. Returns -infinity when rho is
/// singular and s > d; returns 0 whenever s == d.
double induced_log_density_unnormalized(const DensityMatrix& rho, double s);

/// Unitary obtained by Gram-Schmidt orthonormalization of an n x n Ginibre
/// matrix.
ComplexRectMatrix random_unitary(int n, const RngStream& rng);

/// U diag(lambda) U* for a random unitary U.
HermitianMatrix conjugate_diagonal(std::span<const double> lambda, const ComplexRectMatrix& u);

}  // namespace rmtq
