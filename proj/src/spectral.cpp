#include "nagd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nagd/linalg.hpp"

namespace nagd {

namespace {

constexpr double kClusterRelTol = 1e-6;
constexpr double kNullRelTol = 1e-7;

void validate_square(const Matrix& m) {
  if (m.rows() == 0 || !m.is_square()) {
    throw Error(ErrorCode::InvalidArgument, "expected a non-empty square matrix");
  }
  if (!linalg::all_finite(m)) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

CVector eigenvalues_2x2(const Matrix& g) {
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double disc = half_diff * half_diff + b * c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double big = mean + (mean >= 0.0 ? s : -s);
    const double det = a * d - b * c;
    const double small = big != 0.0 ? det / big : mean - s;
    return {Complex(big, 0.0), Complex(small, 0.0)};
  }
  const double s = std::sqrt(-disc);
  return {Complex(mean, s), Complex(mean, -s)};
}

// Fix the phase so the largest-magnitude component is real and positive.
void normalize_phase(CVector& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[k]) * (1.0 + 1e-12)) k = i;
  }
  const double mag = std::abs(v[k]);
  if (mag == 0.0) return;
  const Complex phase = std::conj(v[k]) / mag;
  const double nrm = linalg::norm2(v);
  for (auto& x : v) x *= phase / nrm;
  v[k] = Complex(v[k].real(), 0.0);
}

// Columns spanning the (numerical) null space of (A - mu I), `count` of them.
// Returns fewer than `count` genuine null vectors when the eigenvalue is
// defective; the gap is filled by repeating the best vector so that P comes
// out singular.
std::vector<CVector> null_vectors(const CMatrix& a, Complex mu, std::size_t count, double scale) {
  const std::size_t n = a.rows();
  CMatrix shifted = a;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
  const auto s = linalg::svd(shifted);
  std::vector<CVector> out;
  const std::size_t best = n - 1;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t idx = n - 1 - k;
    const bool genuine = k == 0 || s.singular_values[idx] <= kNullRelTol * scale;
    CVector v = s.v.column(genuine ? idx : best);
    normalize_phase(v);
    out.push_back(std::move(v));
  }
  return out;
}

bool is_real(Complex z) { return z.imag() == 0.0; }

}  // namespace

double default_tolerance(const Matrix& m) { return 1e-9 * std::max(1.0, linalg::frobenius_norm(m)); }

Spectrum eigendecompose(const Matrix& g, double tol) {
  validate_square(g);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigendecompose: tol must be positive");

  const std::size_t n = g.rows();
  const double scale = std::max(1.0, linalg::frobenius_norm(g));
  Spectrum s;
  s.n = n;
  s.tol = tol;

  const Matrix gt = g.transpose();
  double asym = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) asym += std::pow(g.values()[i] - gt.values()[i], 2);
  s.is_symmetric = std::sqrt(asym) <= tol;
  const Matrix ggt = linalg::matmul(g, gt);
  const Matrix gtg = linalg::matmul(gt, g);
  double comm = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) comm += std::pow(ggt.values()[i] - gtg.values()[i], 2);
  s.is_normal = std::sqrt(comm) <= tol * scale;

  s.right_vectors = CMatrix(n, n);
  if (s.is_symmetric) {
    const auto eig = linalg::symmetric_eigen(g);
    for (std::size_t k = 0; k < n; ++k) {
      s.eigenvalues.emplace_back(eig.values[k], 0.0);
      CVector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = eig.vectors(i, k);
      normalize_phase(v);
      for (std::size_t i = 0; i < n; ++i) s.right_vectors(i, k) = v[i].real();
    }
  } else {
    if (n == 1) {
      s.eigenvalues = {Complex(g(0, 0), 0.0)};
    } else if (n == 2) {
      s.eigenvalues = eigenvalues_2x2(g);
    } else {
      s.eigenvalues = linalg::hessenberg_qr_eigenvalues(g, static_cast<int>(100 * n));
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() > b.imag();
    });

    const CMatrix gc = linalg::to_complex(g);
    const double cluster_tol = kClusterRelTol * scale;
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Complex lam = s.eigenvalues[i];
      // A negative-imaginary member of a conjugate pair reuses the conjugate
      // of its partner's vector.
      if (lam.imag() < 0.0) {
        const auto partner = std::find_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](Complex z) {
          return std::abs(z - std::conj(lam)) <= cluster_tol;
        });
        const auto j = static_cast<std::size_t>(partner - s.eigenvalues.begin());
        if (partner != s.eigenvalues.end() && done[j]) {
          for (std::size_t r = 0; r < n; ++r) s.right_vectors(r, i) = std::conj(s.right_vectors(r, j));
          done[i] = true;
          continue;
        }
      }
      std::vector<std::size_t> members;
      Complex centre{};
      for (std::size_t j = i; j < n; ++j) {
        if (!done[j] && std::abs(s.eigenvalues[j] - lam) <= cluster_tol) {
          members.push_back(j);
          centre += s.eigenvalues[j];
        }
      }
      centre /= static_cast<double>(members.size());
      if (std::abs(centre.imag()) <= cluster_tol && is_real(lam)) centre = Complex(centre.real(), 0.0);
      const auto vecs = null_vectors(gc, centre, members.size(), scale);
      for (std::size_t k = 0; k < members.size(); ++k) {
        for (std::size_t r = 0; r < n; ++r) s.right_vectors(r, members[k]) = vecs[k][r];
        done[members[k]] = true;
      }
    }
  }

  s.kappa_P = linalg::condition_number(s.right_vectors);
  s.left_vectors = CMatrix(n, n);
  const auto inv = std::isfinite(s.kappa_P) ? linalg::inverse(s.right_vectors) : std::nullopt;
  if (inv) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.left_vectors(j, i) = std::conj((*inv)(i, j));
  } else {
    // No biorthogonal family exists; report unit left eigenvectors instead.
    const CMatrix gh = linalg::adjoint(linalg::to_complex(g));
    for (std::size_t i = 0; i < n; ++i) {
      auto w = null_vectors(gh, std::conj(s.eigenvalues[i]), 1, scale).front();
      for (std::size_t r = 0; r < n; ++r) s.left_vectors(r, i) = w[r];
    }
  }

  double biorth = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex p = linalg::conj_dot(s.left_vector(i), s.right_vector(j));
      biorth = std::max(biorth, std::abs(p - (i == j ? 1.0 : 0.0)));
    }
  s.biorthogonality_residual = biorth;

  if (inv) {
    CMatrix pl = s.right_vectors;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pl(i, j) *= s.eigenvalues[j];
    const CMatrix rec = linalg::matmul(pl, *inv);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) err += std::norm(rec(i, j) - g(i, j));
    const double gn = linalg::frobenius_norm(g);
    s.reconstruction_residual = std::sqrt(err) / (gn > 0.0 ? gn : 1.0);
  } else {
    s.reconstruction_residual = std::numeric_limits<double>::infinity();
  }

  s.is_diagonalizable = inv.has_value() && s.kappa_P <= kDiagonalizableKappaMax &&
                        s.biorthogonality_residual <= kDiagonalizableBiorthMax;
  return s;
}

double predicted_rate(Complex lambda, double tol) { return classify_eigenvalue(lambda, tol).rate; }

EigenClass classify_eigenvalue(Complex lambda, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify_eigenvalue: tol must be positive");
  EigenClass c;
  c.lambda = lambda;
  if (std::abs(lambda) <= tol) {
    c.tag = EigenTag::Zero;
  } else if (std::abs(lambda.imag()) <= tol) {
    if (lambda.real() > tol) {
      c.tag = EigenTag::PositiveReal;
    } else if (lambda.real() < -tol) {
      c.tag = EigenTag::NegativeReal;
    } else {
      c.tag = EigenTag::Zero;
    }
  } else {
    c.tag = EigenTag::StrictlyComplex;
  }
  switch (c.tag) {
    case EigenTag::PositiveReal: c.rate = -1.5; break;
    case EigenTag::Zero: c.rate = 0.0; break;
    case EigenTag::NegativeReal: c.rate = std::sqrt(-lambda.real()); break;
    // std::sqrt keeps the imaginary part accurate as Im(lambda) -> 0.
    case EigenTag::StrictlyComplex: c.rate = std::abs(std::sqrt(lambda).imag()); break;
  }
  return c;
}

StabilityVerdict classify_matrix(const Spectrum& s, double t0) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify_matrix: t0 must be positive");
  StabilityVerdict v;
  v.kappa_P = s.kappa_P;

  double worst_rate = 0.0;
  std::optional<EigenTag> worst_tag;
  bool any_zero = false;
  double lambda_min = std::numeric_limits<double>::infinity();
  double min_re = std::numeric_limits<double>::infinity();
  for (const Complex& lam : s.eigenvalues) {
    const EigenClass c = classify_eigenvalue(lam, s.tol);
    v.per_eigenvalue.push_back(c);
    min_re = std::min(min_re, lam.real());
    switch (c.tag) {
      case EigenTag::PositiveReal:
        lambda_min = std::min(lambda_min, lam.real());
        break;
      case EigenTag::Zero:
        any_zero = true;
        break;
      case EigenTag::NegativeReal:
      case EigenTag::StrictlyComplex:
        if (!worst_tag || c.rate > worst_rate ||
            (c.rate == worst_rate && c.tag == EigenTag::StrictlyComplex)) {
          worst_rate = c.rate;
          worst_tag = c.tag;
        }
        break;
    }
  }

  if (worst_tag) {
    v.nagd_verdict = *worst_tag == EigenTag::NegativeReal ? NagdVerdict::UnstableNegativeReal
                                                           : NagdVerdict::UnstableComplex;
    v.dominant_growth_rate = worst_rate;
  } else if (!s.is_diagonalizable) {
    v.nagd_verdict = NagdVerdict::IndeterminateJordan;
  } else {
    v.nagd_verdict = any_zero ? NagdVerdict::StableToNullSpace : NagdVerdict::StableConvergent;
    double c = 0.5 * t0;
    if (std::isfinite(lambda_min)) c = std::max(c, 1.0 / std::sqrt(lambda_min));
    v.bound_constant_C = c;
  }

  v.first_order_rate = min_re;
  bool all_positive = true;
  bool all_nonnegative = true;
  for (const Complex& lam : s.eigenvalues) {
    if (!(lam.real() > s.tol)) all_positive = false;
    if (lam.real() < -s.tol) all_nonnegative = false;
  }
  v.first_order_verdict = all_positive      ? FirstOrderVerdict::ExponentiallyStable
                          : all_nonnegative ? FirstOrderVerdict::MarginallyStable
                                            : FirstOrderVerdict::Unstable;
  return v;
}

double boundedness_bound(const Spectrum& s, double t0, double q0_norm, double v0_norm) {
  const StabilityVerdict v = classify_matrix(s, t0);
  if (!v.nagd_stable() || !s.is_diagonalizable || !v.bound_constant_C) {
    throw Error(ErrorCode::NotApplicable,
                "boundedness bound requires a diagonalizable matrix with eigenvalues in R>=0");
  }
  return s.kappa_P * (q0_norm + *v.bound_constant_C * v0_norm);
}

std::string_view to_string(EigenTag tag) noexcept {
  switch (tag) {
    case EigenTag::PositiveReal: return "PositiveReal";
    case EigenTag::Zero: return "Zero";
    case EigenTag::NegativeReal: return "NegativeReal";
    case EigenTag::StrictlyComplex: return "StrictlyComplex";
  }
  return "?";
}

std::string_view to_string(NagdVerdict v) noexcept {
  switch (v) {
    case NagdVerdict::StableConvergent: return "StableConvergent";
    case NagdVerdict::StableToNullSpace: return "StableToNullSpace";
    case NagdVerdict::UnstableNegativeReal: return "UnstableNegativeReal";
    case NagdVerdict::UnstableComplex: return "UnstableComplex";
    case NagdVerdict::IndeterminateJordan: return "IndeterminateJordan";
  }
  return "?";
}

std::string_view to_string(FirstOrderVerdict v) noexcept {
  switch (v) {
    case FirstOrderVerdict::ExponentiallyStable: return "ExponentiallyStable";
    case FirstOrderVerdict::MarginallyStable: return "MarginallyStable";
    case FirstOrderVerdict::Unstable: return "Unstable";
  }
  return "?";
}

}  // namespace nagd
