#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nagd/matrix.hpp"

namespace nagd {

/// Eigendecomposition of a real square matrix together with the structural
/// facts the stability verdicts depend on.
///
/// `right_vectors` holds P (unit 2-norm columns). `left_vectors` holds the
/// columns w_i with w_i^* = row i of P^{-1}, so w_i^* G = lambda_i w_i^* and
/// w_i^* v_j = delta_ij whenever the matrix is diagonalizable.
struct Spectrum {
  std::size_t n = 0;
  CVector eigenvalues;
  CMatrix right_vectors;
  CMatrix left_vectors;
  bool is_symmetric = false;
  bool is_normal = false;
  bool is_diagonalizable = false;
  double kappa_P = 1.0;
  double biorthogonality_residual = 0.0;
  double reconstruction_residual = 0.0;
  double tol = 0.0;  // classification tolerance used downstream

  CVector right_vector(std::size_t i) const { return right_vectors.column(i); }
  CVector left_vector(std::size_t i) const { return left_vectors.column(i); }
};

enum class EigenTag { PositiveReal, Zero, NegativeReal, StrictlyComplex };

struct EigenClass {
  EigenTag tag = EigenTag::Zero;
  Complex lambda{};
  /// PositiveReal: algebraic decay exponent (-1.5). Zero: 0. NegativeReal and
  /// StrictlyComplex: exponential growth rate |Im sqrt(lambda)|.
  double rate = 0.0;
};

enum class NagdVerdict {
  StableConvergent,
  StableToNullSpace,
  UnstableNegativeReal,
  UnstableComplex,
  IndeterminateJordan,
};

enum class FirstOrderVerdict { ExponentiallyStable, MarginallyStable, Unstable };

struct StabilityVerdict {
  std::vector<EigenClass> per_eigenvalue;
  NagdVerdict nagd_verdict = NagdVerdict::StableConvergent;
  FirstOrderVerdict first_order_verdict = FirstOrderVerdict::ExponentiallyStable;
  double dominant_growth_rate = 0.0;
  /// Decay rate min Re(lambda) of the first-order flow (negative when it grows).
  double first_order_rate = 0.0;
  /// max{t0/2, lambda_min^{-1/2}}; only present for the two stable verdicts.
  std::optional<double> bound_constant_C;
  double kappa_P = 1.0;

  bool nagd_stable() const noexcept {
    return nagd_verdict == NagdVerdict::StableConvergent || nagd_verdict == NagdVerdict::StableToNullSpace;
  }
};

/// Default classification tolerance 1e-9 * max(1, ||G||_F).
double default_tolerance(const Matrix& m);

inline constexpr double kDiagonalizableKappaMax = 1e8;
inline constexpr double kDiagonalizableBiorthMax = 1e-6;

/// Eigendecomposition. Symmetric inputs go through cyclic Jacobi; 2x2 inputs
/// use the closed-form characteristic roots; everything else uses Hessenberg
/// reduction plus shifted QR (cap 100*n sweeps). Eigenvectors are taken from
/// the numerical null space of (G - lambda I) for each eigenvalue cluster.
Spectrum eigendecompose(const Matrix& m, double tol);
inline Spectrum eigendecompose(const Matrix& m) { return eigendecompose(m, default_tolerance(m)); }

EigenClass classify_eigenvalue(Complex lambda, double tol);

/// Rate attached to an eigenvalue (see EigenClass::rate). Uses the principal
/// square root, Re(sqrt(lambda)) >= 0.
double predicted_rate(Complex lambda, double tol = 1e-9);

StabilityVerdict classify_matrix(const Spectrum& s, double t0);

/// kappa(P) * (q0_norm + C * v0_norm). Throws NotApplicable unless the
/// verdict is stable and the spectrum diagonalizable.
double boundedness_bound(const Spectrum& s, double t0, double q0_norm, double v0_norm);

std::string_view to_string(EigenTag tag) noexcept;
std::string_view to_string(NagdVerdict v) noexcept;
std::string_view to_string(FirstOrderVerdict v) noexcept;

}  // namespace nagd
