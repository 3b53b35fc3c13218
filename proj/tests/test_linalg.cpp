#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rmtq/linalg.hpp"

using namespace rmtq;

namespace {

HermitianMatrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  std::vector<Complex> data(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    data[i * n + i] = scale * normal(rng);
    for (int j = i + 1; j < n; ++j) {
      const Complex z(scale * normal(rng), scale * normal(rng));
      data[i * n + j] = z;
      data[j * n + i] = std::conj(z);
    }
  }
  return HermitianMatrix(n, data);
}

std::vector<double> descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST_CASE("eigenvalue examples") {
  const auto id = hermitian_eigenvalues(HermitianMatrix::identity(3));
  CHECK(std::vector<double>(id.values().begin(), id.values().end()) == std::vector<double>{1, 1, 1});

  const std::vector<double> diag{2.0, -1.0};
  const auto d = hermitian_eigenvalues(HermitianMatrix::diagonal(diag));
  CHECK(d(1) == doctest::Approx(2.0));
  CHECK(d(2) == doctest::Approx(-1.0));

  const std::vector<double> swap{0, -1, -1, 0};
  const auto s = hermitian_eigenvalues(HermitianMatrix::from_real(2, swap));
  CHECK(s.largest() == doctest::Approx(1.0));
  CHECK(s.smallest() == doctest::Approx(-1.0));
}

TEST_CASE("eigenvalues of a complex 2x2") {
  // [[1, i], [-i, 1]] has eigenvalues 0 and 2
  const HermitianMatrix a(2, {Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(1, 0)});
  const auto spec = hermitian_eigenvalues(a);
  CHECK(spec(1) == doctest::Approx(2.0));
  CHECK(std::abs(spec(2)) < 1e-14);
}

TEST_CASE("eigenvalues of the discrete Laplacian") {
  const int n = 50;
  std::vector<double> m(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    m[i * n + i] = 2.0;
    if (i + 1 < n) m[i * n + i + 1] = m[(i + 1) * n + i] = -1.0;
  }
  const auto spec = hermitian_eigenvalues(HermitianMatrix::from_real(n, m));
  std::vector<double> expected;
  for (int k = 1; k <= n; ++k) expected.push_back(2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1)));
  expected = descending(expected);
  for (int i = 0; i < n; ++i) CHECK(spec.values()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("degenerate spectrum") {
  // all-ones matrix: n once, 0 with multiplicity n - 1
  const int n = 7;
  const std::vector<double> ones(n * n, 1.0);
  const auto spec = hermitian_eigenvalues(HermitianMatrix::from_real(n, ones));
  CHECK(spec.largest() == doctest::Approx(7.0));
  for (int i = 2; i <= n; ++i) CHECK(std::abs(spec(i)) < 1e-13);
}

TEST_CASE("block diagonal spectrum is the merge") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int na = 1 + static_cast<int>(rng() % 10);
    const int nb = 1 + static_cast<int>(rng() % 10);
    const auto a = random_hermitian(na, rng);
    const auto b = random_hermitian(nb, rng);
    const int n = na + nb;
    std::vector<Complex> data(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) data[i * n + j] = a(i, j);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) data[(na + i) * n + na + j] = b(i, j);
    const auto whole = hermitian_eigenvalues(HermitianMatrix(n, data));
    std::vector<double> merged;
    const auto sa = hermitian_eigenvalues(a);
    const auto sb = hermitian_eigenvalues(b);
    merged.insert(merged.end(), sa.values().begin(), sa.values().end());
    merged.insert(merged.end(), sb.values().begin(), sb.values().end());
    merged = descending(merged);
    const double scale = operator_norm(HermitianMatrix(n, data));
    for (int i = 0; i < n; ++i) CHECK(std::abs(whole.values()[i] - merged[i]) <= 1e-12 * scale);
  }
}

TEST_CASE("trace equals eigenvalue sum") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3, 17, 64, 200}) {
    const auto a = random_hermitian(n, rng);
    const auto spec = hermitian_eigenvalues(a);
    CHECK(std::abs(spec.sum() - a.trace()) <= 1e-9 * std::max(1.0, std::abs(a.trace())) * n);
    CHECK(std::is_sorted(spec.values().begin(), spec.values().end(), std::greater<>()));
  }
}

TEST_CASE("eigenvalues satisfy det(A - lambda) = 0 via shifted PSD checks") {
  std::mt19937_64 rng(5);
  const auto a = random_hermitian(12, rng);
  const auto spec = hermitian_eigenvalues(a);
  // A - lambda_min I is PSD and A - (lambda_min + 1e-6) I is not
  auto shifted = [&](double t) {
    HermitianMatrix m = a;
    m += (-t) * HermitianMatrix::identity(12);
    return m;
  };
  CHECK(is_psd(shifted(spec.smallest() - 1e-9)));
  CHECK_FALSE(is_psd(shifted(spec.smallest() + 1e-6)));
}

TEST_CASE("operator norm and max entry") {
  CHECK(operator_norm(HermitianMatrix::identity(4)) == doctest::Approx(1.0));
  const std::vector<double> swap{0, -1, -1, 0};
  CHECK(operator_norm(HermitianMatrix::from_real(2, swap)) == doctest::Approx(1.0));
  const std::vector<double> d{3, -5};
  CHECK(operator_norm(HermitianMatrix::diagonal(d)) == doctest::Approx(5.0));

  CHECK(max_abs_entry(HermitianMatrix(3)) == 0.0);
  const std::vector<double> m{2, -3, -3, 1};
  CHECK(max_abs_entry(HermitianMatrix::from_real(2, m)) == 3.0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    const auto a = random_hermitian(n, rng);
    CHECK(operator_norm(a) <= n * max_abs_entry(a) * (1 + 1e-12));
  }
}

TEST_CASE("is_psd") {
  CHECK(is_psd(HermitianMatrix::identity(3)));
  const std::vector<double> swap{0, -1, -1, 0};
  CHECK_FALSE(is_psd(HermitianMatrix::from_real(2, swap)));
  CHECK(is_psd(HermitianMatrix(2)));
  CHECK_THROWS_AS(is_psd(HermitianMatrix::identity(2), -1.0), std::invalid_argument);

  // monotone in tol
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_hermitian(6, rng);
    bool previous = false;
    for (double tol : {0.0, 1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0}) {
      const bool now = is_psd(a, tol);
      CHECK((!previous || now));
      previous = now;
    }
  }
}

TEST_CASE("construction symmetrizes and validates") {
  const HermitianMatrix a(2, {Complex(1, 0.5), Complex(2, 0), Complex(0, 0), Complex(3, 0)});
  CHECK(a(0, 0) == Complex(1, 0));
  CHECK(a(0, 1) == Complex(1, 0));
  CHECK(a(1, 0) == Complex(1, 0));
  CHECK_THROWS_AS(HermitianMatrix(2, {Complex(1, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix(1, {Complex(std::nan(""), 0)}), std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix(0), std::invalid_argument);
  CHECK_THROWS_AS(ComplexRectMatrix(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("gram product matches the naive product") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  for (auto [rows, cols] : {std::pair{1, 1}, std::pair{3, 5}, std::pair{7, 300}, std::pair{33, 130}}) {
    ComplexRectMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    const auto w = gram(g);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) {
        Complex expected = 0;
        for (int k = 0; k < cols; ++k) expected += g(i, k) * std::conj(g(j, k));
        CHECK(std::abs(w(i, j) - expected) <= 1e-11 * cols);
      }
    CHECK(w(0, 0).imag() == 0.0);
  }
}
