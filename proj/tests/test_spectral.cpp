#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nagd/linalg.hpp"
#include "nagd/spectral.hpp"

using namespace nagd;

namespace {

std::vector<Complex> sorted(CVector v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Roots of l^2 - tr l + det.
std::pair<Complex, Complex> char_roots(const Matrix& g) {
  const double tr = g(0, 0) + g(1, 1), det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const Complex d = std::sqrt(Complex(tr * tr - 4 * det));
  return {(tr - d) / 2.0, (tr + d) / 2.0};
}

double max_residual(const Matrix& G, const Spectrum& S) {
  double worst = 0;
  const CMatrix Gc = linalg::to_complex(G);
  for (std::size_t i = 0; i < S.n; ++i) {
    const CVector v = S.right_vector(i), w = S.left_vector(i);
    for (std::size_t r = 0; r < S.n; ++r) {
      Complex gv = 0, wg = 0;
      for (std::size_t c = 0; c < S.n; ++c) {
        gv += Gc(r, c) * v[c];
        wg += std::conj(w[c]) * Gc(c, r);
      }
      worst = std::max(worst, std::abs(gv - S.eigenvalues[i] * v[r]));
      worst = std::max(worst, std::abs(wg - S.eigenvalues[i] * std::conj(w[r])));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("symmetric 2x2 from the characteristic polynomial") {
  const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
  const Spectrum S = eigendecompose(G);
  const auto e = sorted(S.eigenvalues);
  CHECK(e[0].real() == doctest::Approx(0.6 - std::sqrt(0.08)).epsilon(1e-14));
  CHECK(e[1].real() == doctest::Approx(0.6 + std::sqrt(0.08)).epsilon(1e-14));
  CHECK(std::abs(e[0].real() - 0.317) < 0.005);
  CHECK(std::abs(e[1].real() - 0.883) < 0.005);
  CHECK(S.is_symmetric);
  CHECK(S.is_normal);
  CHECK(S.kappa_P == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_residual(G, S) < 1e-13);
}

TEST_CASE("identity and complex pair") {
  const Spectrum I = eigendecompose(Matrix::identity(2));
  for (auto l : I.eigenvalues) CHECK(std::abs(l - 1.0) < 1e-15);
  CHECK(I.kappa_P == doctest::Approx(1.0));

  const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
  const Spectrum S = eigendecompose(G);
  const auto e = sorted(S.eigenvalues);
  CHECK(std::abs(e[0] - Complex(6.0, -1.5)) < 1e-13);
  CHECK(std::abs(e[1] - Complex(6.0, 1.5)) < 1e-13);
  CHECK(S.is_normal);
  CHECK_FALSE(S.is_symmetric);
  CHECK(S.is_diagonalizable);
  CHECK(max_residual(G, S) < 1e-12);
}

TEST_CASE("random matrices: conjugate closure, biorthogonality, residuals") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    Matrix G(n, n);
    for (double& x : G.values()) x = g(rng);
    const Spectrum S = eigendecompose(G);
    CAPTURE(trial);
    REQUIRE(S.eigenvalues.size() == n);
    // closure under conjugation
    for (const auto& l : S.eigenvalues) {
      double best = 1e300;
      for (const auto& m : S.eigenvalues) best = std::min(best, std::abs(std::conj(l) - m));
      CHECK(best < 1e-10);
    }
    // trace and determinant
    Complex sum = 0, prod = 1;
    for (const auto& l : S.eigenvalues) sum += l, prod *= l;
    double tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += G(i, i);
    CHECK(std::abs(sum - tr) < 1e-10 * std::max(1.0, std::abs(tr)));
    if (n == 2) {
      const auto [a, b] = char_roots(G);
      const auto e = sorted(S.eigenvalues);
      const auto r = sorted({a, b});
      CHECK(std::abs(e[0] - r[0]) < 1e-12);
      CHECK(std::abs(e[1] - r[1]) < 1e-12);
    }
    if (S.is_diagonalizable) {
      CHECK(max_residual(G, S) < 1e-8 * std::max(1.0, linalg::frobenius_norm(G)));
      CHECK(S.biorthogonality_residual < 1e-8);
      CHECK(S.reconstruction_residual < 1e-8);
    }
  }
}

TEST_CASE("symmetric Jacobi path") {
  const Matrix G = Matrix::from_rows({{1.0, 0.3, 0.2}, {0.3, 0.8, 0.25}, {0.2, 0.25, 0.6}});
  const Spectrum S = eigendecompose(G);
  auto e = sorted(S.eigenvalues);
  const double quoted[] = {0.43, 0.62, 1.35};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(e[i].imag()) == 0.0);
    CHECK(std::abs(e[i].real() - quoted[i]) < 0.005);
  }
  CHECK(S.kappa_P == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_residual(G, S) < 1e-13);
}

TEST_CASE("Jordan block is not diagonalizable") {
  const Spectrum S = eigendecompose(Matrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}));
  CHECK_FALSE(S.is_diagonalizable);
  const auto v = classify_matrix(S, 1.0);
  CHECK(v.nagd_verdict == NagdVerdict::IndeterminateJordan);
  CHECK_FALSE(v.bound_constant_C.has_value());
}

TEST_CASE("eigenvalue classification") {
  const double tol = 1e-9;
  auto c = classify_eigenvalue(0.5, tol);
  CHECK(c.tag == EigenTag::PositiveReal);
  CHECK(c.rate == -1.5);
  c = classify_eigenvalue(-0.5, tol);
  CHECK(c.tag == EigenTag::NegativeReal);
  CHECK(c.rate == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  c = classify_eigenvalue(Complex(6.0, 1.5), tol);
  CHECK(c.tag == EigenTag::StrictlyComplex);
  // sqrt((|l| - a)/2)
  CHECK(c.rate == doctest::Approx(std::sqrt((std::hypot(6.0, 1.5) - 6.0) / 2.0)).epsilon(1e-13));
  CHECK(c.rate == doctest::Approx(0.30386).epsilon(1e-4));
  CHECK(classify_eigenvalue(Complex(0.0, 1e-10), tol).tag == EigenTag::Zero);
  CHECK(classify_eigenvalue(Complex(0.0, 1.0), tol).rate == doctest::Approx(std::sqrt(0.5)));
  CHECK(predicted_rate(1.0) == -1.5);
  CHECK(predicted_rate(-0.25) == doctest::Approx(0.5));
  CHECK(predicted_rate(0.0) == 0.0);
  CHECK_THROWS_AS(classify_eigenvalue(1.0, 0.0), Error);
}

TEST_CASE("rate continuity at the real axis") {
  for (double a = 0.1; a <= 10.0; a *= 1.3) {
    CAPTURE(a);
    CHECK(predicted_rate(Complex(a, 1e-8)) <= 1e-4);
  }
}

TEST_CASE("matrix verdicts") {
  const auto pd = classify_matrix(eigendecompose(Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}})), 1.0);
  CHECK(pd.nagd_verdict == NagdVerdict::StableConvergent);
  CHECK(pd.first_order_verdict == FirstOrderVerdict::ExponentiallyStable);
  REQUIRE(pd.bound_constant_C.has_value());
  CHECK(*pd.bound_constant_C == doctest::Approx(1.0 / std::sqrt(0.6 - std::sqrt(0.08))).epsilon(1e-12));
  CHECK(*pd.bound_constant_C == doctest::Approx(1.777).epsilon(1e-3));

  const auto cx = classify_matrix(eigendecompose(Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}})), 1.0);
  CHECK(cx.nagd_verdict == NagdVerdict::UnstableComplex);
  CHECK(cx.first_order_verdict == FirstOrderVerdict::ExponentiallyStable);
  CHECK(cx.first_order_rate == doctest::Approx(6.0));
  CHECK_FALSE(cx.bound_constant_C.has_value());

  const auto sk = classify_matrix(eigendecompose(Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}})), 1.0);
  CHECK(sk.nagd_verdict == NagdVerdict::UnstableComplex);
  CHECK(sk.first_order_verdict == FirstOrderVerdict::MarginallyStable);
  CHECK(sk.dominant_growth_rate == doctest::Approx(std::sqrt(0.5)));

  const auto ng = classify_matrix(eigendecompose(Matrix::from_rows({{1.0, 0.0}, {0.0, -0.5}})), 1.0);
  CHECK(ng.nagd_verdict == NagdVerdict::UnstableNegativeReal);
  CHECK(ng.first_order_verdict == FirstOrderVerdict::Unstable);

  const auto ps = classify_matrix(eigendecompose(Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}})), 1.0);
  CHECK(ps.nagd_verdict == NagdVerdict::StableToNullSpace);
  CHECK(ps.first_order_verdict == FirstOrderVerdict::MarginallyStable);
  CHECK(*ps.bound_constant_C == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("boundedness bound examples") {
  CHECK(boundedness_bound(eigendecompose(Matrix(2, 2)), 2.0, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(boundedness_bound(eigendecompose(Matrix::identity(2)), 1.0, 1.0, 0.0) == doctest::Approx(1.0));
  const double q = std::hypot(0.5, 0.3);
  CHECK(boundedness_bound(eigendecompose(Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}})), 1.0, q, 0.0) ==
        doctest::Approx(q).epsilon(1e-12));
  CHECK_THROWS_AS(boundedness_bound(eigendecompose(Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}})), 1.0, 1, 1), Error);
}

TEST_CASE("linear algebra helpers") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    Matrix A(n, n);
    for (double& x : A.values()) x = g(rng);
    const auto inv = linalg::inverse(A);
    REQUIRE(inv.has_value());
    const Matrix I = linalg::matmul(A, *inv);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(I(i, j) - (i == j)) < 1e-10);
    const auto s = linalg::svd(A);
    // orthogonal U, V and A = U S V^T
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double uu = 0, rec = 0;
        for (std::size_t k = 0; k < n; ++k) {
          uu += s.u(k, i) * s.u(k, j);
          rec += s.u(i, k) * s.singular_values[k] * s.v(j, k);
        }
        CHECK(std::abs(uu - (i == j)) < 1e-12);
        CHECK(std::abs(rec - A(i, j)) < 1e-12);
      }
  }
  const Matrix N = linalg::null_space(Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}}), 1e-10);
  REQUIRE(N.cols() == 1);
  CHECK(std::abs(N(0, 0) + N(1, 0)) < 1e-14);
  CHECK(std::abs(std::hypot(N(0, 0), N(1, 0)) - 1.0) < 1e-14);
}
