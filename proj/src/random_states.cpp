#include "rmtq/random_states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rmtq {

std::mt19937_64 RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x5eedu};
  return std::mt19937_64(seq);
}

DensityMatrix::DensityMatrix(HermitianMatrix matrix, std::optional<BipartiteShape> shape)
    : matrix_(std::move(matrix)), shape_(shape) {
  const double tr = matrix_.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr) + ", expected 1");
  }
  if (shape_) {
    if (shape_->d1 * shape_->d2 != matrix_.size()) {
      throw std::invalid_argument("DensityMatrix: d1 * d2 does not match the dimension");
    }
    if (shape_->p() < 2) throw std::invalid_argument("DensityMatrix: both factors must have dimension >= 2");
  }
}

void DensityMatrix::check_positive() const {
  if (hermitian_eigenvalues(matrix_).smallest() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  }
}

ComplexRectMatrix sample_ginibre(int d, int s, const RngStream& rng) {
  ComplexRectMatrix g(d, s);
  ComplexGaussianSource gauss(rng);
  for (auto& z : g.data()) z = gauss();
  return g;
}

HermitianMatrix sample_wishart(int d, int s, const RngStream& rng) { return gram(sample_ginibre(d, s, rng)); }

HermitianMatrix centered_normalized(const HermitianMatrix& w, double d, double s) {
  if (w.size() != static_cast<int>(d)) throw std::invalid_argument("centered_normalized: W must be d x d");
  if (!(s > 0)) throw std::invalid_argument("centered_normalized: s must be positive");
  const int n = w.size();
  std::vector<Complex> z(w.data().begin(), w.data().end());
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] -= s;
  const double scale = 1.0 / std::sqrt(d * s);
  for (auto& v : z) v *= scale;
  return HermitianMatrix(n, std::move(z));
}

DensityMatrix sample_induced_state(int d1, int d2, int s, const RngStream& rng) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("sample_induced_state: d1 and d2 must be >= 2");
  HermitianMatrix w = sample_wishart(d1 * d2, s, rng);
  const double tr = w.trace();
  w *= 1.0 / tr;
  return DensityMatrix(std::move(w), BipartiteShape{d1, d2});
}

HermitianMatrix induced_state_by_purification(int d, int s, const RngStream& rng) {
  const int n = d * s;
  ComplexGaussianSource gauss(rng);
  std::vector<Complex> psi(static_cast<std::size_t>(n));
  double norm2 = 0;
  for (auto& z : psi) {
    z = gauss();
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : psi) z *= inv;
  // |psi><psi| is n x n; form it only implicitly through its partial trace
  std::vector<Complex> sigma(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex sum = 0;
      for (int b = 0; b < s; ++b) sum += psi[i * s + b] * std::conj(psi[j * s + b]);
      sigma[static_cast<std::size_t>(i) * d + j] = sum;
    }
  return HermitianMatrix(d, std::move(sigma));
}

HermitianMatrix partial_trace(const HermitianMatrix& rho, int d, int s) {
  if (d < 1 || s < 1 || rho.size() != d * s) {
    throw std::invalid_argument("partial_trace: matrix dimension " + std::to_string(rho.size()) +
                                " is not d * s = " + std::to_string(d) + " * " + std::to_string(s));
  }
  std::vector<Complex> sigma(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex sum = 0;
      for (int b = 0; b < s; ++b) sum += rho(i * s + b, j * s + b);
      sigma[static_cast<std::size_t>(i) * d + j] = sum;
    }
  return HermitianMatrix(d, std::move(sigma));
}

HermitianMatrix partial_transpose(const HermitianMatrix& rho, BipartiteShape shape) {
  const int d1 = shape.d1;
  const int d2 = shape.d2;
  if (d1 < 1 || d2 < 1 || rho.size() != d1 * d2) {
    throw std::invalid_argument("partial_transpose: shape does not match the matrix dimension");
  }
  const int n = rho.size();
  std::vector<Complex> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < d1; ++i)
    for (int a = 0; a < d2; ++a)
      for (int j = 0; j < d1; ++j)
        for (int b = 0; b < d2; ++b) {
          out[static_cast<std::size_t>(i * d2 + a) * n + (j * d2 + b)] = rho(i * d2 + b, j * d2 + a);
        }
  return HermitianMatrix(n, std::move(out));
}

HermitianMatrix partial_transpose(const DensityMatrix& rho) {
  if (!rho.shape()) throw std::invalid_argument("partial_transpose: state has no bipartite shape");
  return partial_transpose(rho.matrix(), *rho.shape());
}

bool is_ppt(const DensityMatrix& rho, std::optional<double> tol) { return is_psd(partial_transpose(rho), tol); }

double induced_log_density_unnormalized(const DensityMatrix& rho, double s) {
  const int d = rho.dimension();
  if (!(s >= d)) throw std::invalid_argument("induced_log_density_unnormalized: requires s >= d");
  if (s == d) return 0.0;
  const Spectrum spec = hermitian_eigenvalues(rho.matrix());
  if (spec.smallest() <= 0.0) return -std::numeric_limits<double>::infinity();
  double log_det = 0;
  for (double v : spec.values()) log_det += std::log(v);
  return (s - d) * log_det;
}

ComplexRectMatrix random_unitary(int n, const RngStream& rng) {
  ComplexRectMatrix u = sample_ginibre(n, n, rng);
  // modified Gram-Schmidt on columns, applied twice for orthogonality to
  // working precision
  for (int col = 0; col < n; ++col) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int prev = 0; prev < col; ++prev) {
        Complex dot = 0;
        for (int r = 0; r < n; ++r) dot += std::conj(u(r, prev)) * u(r, col);
        for (int r = 0; r < n; ++r) u(r, col) -= dot * u(r, prev);
      }
    }
    double norm2 = 0;
    for (int r = 0; r < n; ++r) norm2 += std::norm(u(r, col));
    const double inv = 1.0 / std::sqrt(norm2);
    for (int r = 0; r < n; ++r) u(r, col) *= inv;
  }
  return u;
}

HermitianMatrix conjugate_diagonal(std::span<const double> lambda, const ComplexRectMatrix& u) {
  const int n = static_cast<int>(lambda.size());
  if (u.rows() != n || u.cols() != n) throw std::invalid_argument("conjugate_diagonal: shape mismatch");
  std::vector<Complex> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex sum = 0;
      for (int k = 0; k < n; ++k) sum += u(i, k) * lambda[k] * std::conj(u(j, k));
      out[static_cast<std::size_t>(i) * n + j] = sum;
    }
  return HermitianMatrix(n, std::move(out));
}

}  // namespace rmtq
