#include "rmtq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace rmtq {

namespace {

void require_dimension(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
}

void require_finite(std::span<const Complex> data, const char* what) {
  for (const auto& z : data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

ComplexRectMatrix::ComplexRectMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require_dimension(rows, "ComplexRectMatrix");
  require_dimension(cols, "ComplexRectMatrix");
  data_.assign(static_cast<std::size_t>(rows) * cols, Complex{});
}

ComplexRectMatrix::ComplexRectMatrix(int rows, int cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_dimension(rows, "ComplexRectMatrix");
  require_dimension(cols, "ComplexRectMatrix");
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("ComplexRectMatrix: data size does not match shape");
  }
  require_finite(data_, "ComplexRectMatrix");
}

HermitianMatrix::HermitianMatrix(int n) : n_(n) {
  require_dimension(n, "HermitianMatrix");
  data_.assign(static_cast<std::size_t>(n) * n, Complex{});
}

HermitianMatrix::HermitianMatrix(int n, std::vector<Complex> data) : n_(n), data_(std::move(data)) {
  require_dimension(n, "HermitianMatrix");
  if (data_.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("HermitianMatrix: data size does not match dimension");
  }
  require_finite(data_, "HermitianMatrix");
  for (int i = 0; i < n; ++i) {
    data_[i * n + i] = data_[i * n + i].real();
    for (int j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (data_[i * n + j] + std::conj(data_[j * n + i]));
      data_[i * n + j] = avg;
      data_[j * n + i] = std::conj(avg);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix out(n);
  for (int i = 0; i < n; ++i) out.data_[i * n + i] = 1.0;
  return out;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  HermitianMatrix out(n);
  for (int i = 0; i < n; ++i) out.data_[i * n + i] = values[i];
  require_finite(out.data_, "HermitianMatrix::diagonal");
  return out;
}

HermitianMatrix HermitianMatrix::from_real(int n, std::span<const double> row_major) {
  if (row_major.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("HermitianMatrix::from_real: data size does not match dimension");
  }
  return HermitianMatrix(n, std::vector<Complex>(row_major.begin(), row_major.end()));
}

double HermitianMatrix::trace() const {
  double t = 0;
  for (int i = 0; i < n_; ++i) t += data_[i * n_ + i].real();
  return t;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.n_ != n_) throw std::invalid_argument("HermitianMatrix: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double factor) {
  for (auto& z : data_) z *= factor;
  return *this;
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Spectrum: non-finite eigenvalue");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

double Spectrum::sum() const {
  // sum the small values first
  double total = 0;
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) total += *it;
  return total;
}

HermitianMatrix gram(const ComplexRectMatrix& g) {
  const int d = g.rows();
  const int s = g.cols();
  constexpr int kBlock = 128;
  std::vector<double> acc_re(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<double> acc_im(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<double> re(static_cast<std::size_t>(d) * kBlock);
  std::vector<double> im(static_cast<std::size_t>(d) * kBlock);

  for (int k0 = 0; k0 < s; k0 += kBlock) {
    const int kb = std::min(kBlock, s - k0);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < kb; ++k) {
        re[i * kBlock + k] = g(i, k0 + k).real();
        im[i * kBlock + k] = g(i, k0 + k).imag();
      }
    }
    // W_ij += sum_k G_ik conj(G_jk) over 2x2 tiles of the lower triangle
    for (int i = 0; i < d; i += 2) {
      const int i1 = std::min(i + 1, d - 1);
      const double* ar0 = &re[i * kBlock];
      const double* ai0 = &im[i * kBlock];
      const double* ar1 = &re[i1 * kBlock];
      const double* ai1 = &im[i1 * kBlock];
      for (int j = 0; j <= i; j += 2) {
        const int j1 = std::min(j + 1, d - 1);
        const double* br0 = &re[j * kBlock];
        const double* bi0 = &im[j * kBlock];
        const double* br1 = &re[j1 * kBlock];
        const double* bi1 = &im[j1 * kBlock];
        double r00 = 0, r01 = 0, r10 = 0, r11 = 0;
        double m00 = 0, m01 = 0, m10 = 0, m11 = 0;
#pragma omp simd reduction(+ : r00, r01, r10, r11, m00, m01, m10, m11)
        for (int k = 0; k < kb; ++k) {
          r00 += ar0[k] * br0[k] + ai0[k] * bi0[k];
          m00 += ai0[k] * br0[k] - ar0[k] * bi0[k];
          r01 += ar0[k] * br1[k] + ai0[k] * bi1[k];
          m01 += ai0[k] * br1[k] - ar0[k] * bi1[k];
          r10 += ar1[k] * br0[k] + ai1[k] * bi0[k];
          m10 += ai1[k] * br0[k] - ar1[k] * bi0[k];
          r11 += ar1[k] * br1[k] + ai1[k] * bi1[k];
          m11 += ai1[k] * br1[k] - ar1[k] * bi1[k];
        }
        auto store = [&](int r, int c, double vr, double vi) {
          if (c <= r) {
            acc_re[static_cast<std::size_t>(r) * d + c] += vr;
            acc_im[static_cast<std::size_t>(r) * d + c] += vi;
          }
        };
        store(i, j, r00, m00);
        if (j1 != j) store(i, j1, r01, m01);
        if (i1 != i) {
          store(i1, j, r10, m10);
          if (j1 != j) store(i1, j1, r11, m11);
        }
      }
    }
  }

  std::vector<Complex> w(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    w[static_cast<std::size_t>(i) * d + i] = acc_re[static_cast<std::size_t>(i) * d + i];
    for (int j = 0; j < i; ++j) {
      const Complex z(acc_re[static_cast<std::size_t>(i) * d + j], acc_im[static_cast<std::size_t>(i) * d + j]);
      w[static_cast<std::size_t>(i) * d + j] = z;
      w[static_cast<std::size_t>(j) * d + i] = std::conj(z);
    }
  }
  return HermitianMatrix(d, std::move(w), HermitianMatrix::Trusted{});
}

namespace {

// Reduces a Hermitian matrix (row-major, overwritten) to a real symmetric
// tridiagonal matrix with diagonal `diag` and off-diagonal `off`, where
// off[k] couples diag[k] and diag[k + 1].
void householder_tridiagonalize(std::vector<Complex>& a, int n, std::vector<double>& diag, std::vector<double>& off) {
  diag.assign(n, 0.0);
  off.assign(n, 0.0);
  std::vector<Complex> v(n), w(n);
  auto at = [&](int i, int j) -> Complex& { return a[static_cast<std::size_t>(i) * n + j]; };

  for (int k = 0; k + 1 < n; ++k) {
    diag[k] = at(k, k).real();
    const int m = n - k - 1;
    double norm2 = 0;
    for (int i = k + 1; i < n; ++i) norm2 += std::norm(at(i, k));
    const double norm = std::sqrt(norm2);
    if (m == 1 || norm == 0.0) {
      off[k] = std::abs(at(k + 1, k));
      continue;
    }
    const Complex x0 = at(k + 1, k);
    const double ax0 = std::abs(x0);
    const Complex phase = ax0 == 0.0 ? Complex(1.0) : x0 / ax0;
    const Complex alpha = -phase * norm;

    for (int i = 0; i < m; ++i) v[i] = at(k + 1 + i, k);
    v[0] -= alpha;
    const double tau = 1.0 / (norm * (norm + ax0));  // 2 / |v|^2

    // w = tau * B v, with B the trailing block
    Complex vw = 0;
    for (int i = 0; i < m; ++i) {
      Complex sum = 0;
      const Complex* row = &at(k + 1 + i, k + 1);
      for (int j = 0; j < m; ++j) sum += row[j] * v[j];
      w[i] = tau * sum;
      vw += std::conj(v[i]) * w[i];
    }
    const double half_k = 0.5 * tau * vw.real();
    for (int i = 0; i < m; ++i) w[i] -= half_k * v[i];
    // B <- B - v w* - w v*
    for (int i = 0; i < m; ++i) {
      Complex* row = &at(k + 1 + i, k + 1);
      const Complex vi = v[i];
      const Complex wi = w[i];
      for (int j = 0; j < m; ++j) row[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
    }
    off[k] = norm;  // |alpha|; the phase is removed by a diagonal unitary
  }
  diag[n - 1] = at(n - 1, n - 1).real();
}

// Implicit-shift QL on a symmetric tridiagonal matrix, eigenvalues only.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  constexpr int kMaxSweeps = 60;
  if (n > 0) e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps) {
        throw NumericalFailure("hermitian_eigenvalues: QL iteration did not converge for eigenvalue " +
                               std::to_string(l));
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

}  // namespace

Spectrum hermitian_eigenvalues(const HermitianMatrix& a) {
  const int n = a.size();
  std::vector<Complex> work(a.data().begin(), a.data().end());
  std::vector<double> diag, off;
  householder_tridiagonalize(work, n, diag, off);
  tridiagonal_ql(diag, off);
  return Spectrum(std::move(diag));
}

double operator_norm(const HermitianMatrix& a) {
  const Spectrum spec = hermitian_eigenvalues(a);
  return std::max(std::abs(spec.largest()), std::abs(spec.smallest()));
}

double max_abs_entry(const HermitianMatrix& a) {
  double m = 0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double default_psd_tolerance(const HermitianMatrix& a) { return 1e-10 * operator_norm(a); }

bool is_psd(const HermitianMatrix& a, std::optional<double> tol) {
  const Spectrum spec = hermitian_eigenvalues(a);
  const double norm = std::max(std::abs(spec.largest()), std::abs(spec.smallest()));
  const double t = tol.value_or(1e-10 * norm);
  if (t < 0) throw std::invalid_argument("is_psd: tolerance must be non-negative");
  return spec.smallest() >= -t;
}

}  // namespace rmtq
