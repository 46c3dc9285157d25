#pragma once

#include "nagd/matrix.hpp"
#include "nagd/spectral.hpp"

namespace nagd {

// Bessel functions of order 0 and 1 on the principal branch |arg z| < pi.
//
// |z| <= 20: ascending series, evaluated in extended precision with
// compensated summation. |z| > 20: Hankel asymptotic expansion, summed until
// the terms stop decreasing (always at least 10 terms).
Complex bessel_j0(Complex z);
Complex bessel_j1(Complex z);
Complex bessel_y0(Complex z);
Complex bessel_y1(Complex z);

// Direct access to the two regimes, for checking the handover band.
Complex bessel_j1_series(Complex z);
Complex bessel_y1_series(Complex z);
Complex bessel_j1_asymptotic(Complex z);
Complex bessel_y1_asymptotic(Complex z);

// Modified Bessel functions for real x > 0. Throws OverflowSaturation when
// the result would exceed e^700.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_k0(double x);
double bessel_k1(double x);

inline constexpr double kExponentCap = 700.0;

enum class ModalBranch { ZeroBranch, PositiveRealBranch, NegativeRealBranch, ComplexBranch };

/// Closed-form solution of  y'' + (3/t) y' + lambda y = 0  matching
/// (y(t0), y'(t0)) = (y0, ydot0).
///
/// Basis by branch: {1, t^-2}; {J1(s t)/t, Y1(s t)/t} with s the principal
/// root of lambda (positive real and complex); {I1(mu t)/t, K1(mu t)/t} with
/// mu = sqrt(-lambda) (negative real).
struct ModalSolution {
  Complex lambda{};
  ModalBranch branch = ModalBranch::ZeroBranch;
  Complex c1{};
  Complex c2{};
  double t0 = 1.0;
  Complex y0{};
  Complex ydot0{};
};

struct ModalValue {
  Complex y{};
  Complex ydot{};
  /// Set when the growing branch passed the exponent cap; y and ydot then
  /// carry a saturated magnitude (about e^700) with the correct phase.
  bool saturated = false;
};

/// Branch decision is delegated to classify_eigenvalue(lambda, tol).
ModalSolution make_modal_solution(Complex lambda, double t0, Complex y0, Complex ydot0, double tol = 1e-9);

/// Evaluate at t >= t0 (throws InvalidArgument below t0).
ModalValue eval_modal(const ModalSolution& sol, double t);

ModalBranch branch_for(EigenTag tag) noexcept;
std::string_view to_string(ModalBranch b) noexcept;

}  // namespace nagd
