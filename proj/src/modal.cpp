#include <cmath>

#include "nagd/special.hpp"

namespace nagd {

namespace {

struct BasisAt {
  Complex f1, f2, df1, df2;
};

BasisAt basis_at(ModalBranch branch, Complex lambda, double t) {
  const double inv_t = 1.0 / t;
  const double inv_t2 = inv_t * inv_t;
  switch (branch) {
    case ModalBranch::ZeroBranch:
      return {1.0, inv_t2, 0.0, -2.0 * inv_t2 * inv_t};
    case ModalBranch::NegativeRealBranch: {
      const double mu = std::sqrt(-lambda.real());
      const double x = mu * t;
      const double i0 = bessel_i0(x), i1 = bessel_i1(x);
      const double k0 = bessel_k0(x), k1 = bessel_k1(x);
      return {i1 * inv_t, k1 * inv_t, mu * i0 * inv_t - 2.0 * i1 * inv_t2, -mu * k0 * inv_t - 2.0 * k1 * inv_t2};
    }
    case ModalBranch::PositiveRealBranch:
    case ModalBranch::ComplexBranch: {
      const Complex root = branch == ModalBranch::PositiveRealBranch ? Complex(std::sqrt(lambda.real()), 0.0)
                                                                     : std::sqrt(lambda);
      const Complex z = root * t;
      const Complex j0 = bessel_j0(z), j1 = bessel_j1(z);
      const Complex y0 = bessel_y0(z), y1 = bessel_y1(z);
      return {j1 * inv_t, y1 * inv_t, root * j0 * inv_t - 2.0 * j1 * inv_t2, root * y0 * inv_t - 2.0 * y1 * inv_t2};
    }
  }
  return {};
}

// log of the dominant basis magnitude at time t, for the overflow cap.
double growth_exponent(const ModalSolution& sol, double t) {
  switch (sol.branch) {
    case ModalBranch::NegativeRealBranch:
      return std::sqrt(-sol.lambda.real()) * t;
    case ModalBranch::ComplexBranch:
      return std::abs(std::sqrt(sol.lambda).imag()) * t;
    default:
      return 0.0;
  }
}

}  // namespace

ModalBranch branch_for(EigenTag tag) noexcept {
  switch (tag) {
    case EigenTag::PositiveReal: return ModalBranch::PositiveRealBranch;
    case EigenTag::Zero: return ModalBranch::ZeroBranch;
    case EigenTag::NegativeReal: return ModalBranch::NegativeRealBranch;
    case EigenTag::StrictlyComplex: return ModalBranch::ComplexBranch;
  }
  return ModalBranch::ZeroBranch;
}

ModalSolution make_modal_solution(Complex lambda, double t0, Complex y0, Complex ydot0, double tol) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "make_modal_solution: t0 must be positive");
  ModalSolution sol;
  sol.lambda = lambda;
  sol.branch = branch_for(classify_eigenvalue(lambda, tol).tag);
  sol.t0 = t0;
  sol.y0 = y0;
  sol.ydot0 = ydot0;

  if (growth_exponent(sol, t0) > kExponentCap) {
    throw Error(ErrorCode::OverflowSaturation, "make_modal_solution: basis overflows at t0");
  }
  const BasisAt b = basis_at(sol.branch, lambda, t0);
  const Complex det = b.f1 * b.df2 - b.f2 * b.df1;
  const double size = std::abs(b.f1 * b.df2) + std::abs(b.f2 * b.df1);
  if (!(std::abs(det) > 1e-14 * size) || !std::isfinite(std::abs(det))) {
    throw Error(ErrorCode::SingularBasis, "make_modal_solution: basis matrix singular at t0");
  }
  sol.c1 = (y0 * b.df2 - b.f2 * ydot0) / det;
  sol.c2 = (b.f1 * ydot0 - b.df1 * y0) / det;
  return sol;
}

ModalValue eval_modal(const ModalSolution& sol, double t) {
  if (!(t >= sol.t0 * (1.0 - 1e-12))) {
    throw Error(ErrorCode::InvalidArgument, "eval_modal: t must not precede t0");
  }
  ModalValue out;
  if (growth_exponent(sol, t) > kExponentCap) {
    const double big = std::exp(kExponentCap);
    const Complex lead = sol.c1 != Complex{} ? sol.c1 / std::abs(sol.c1) : Complex(1.0);
    out.y = big * lead;
    out.ydot = big * lead * growth_exponent(sol, 1.0);
    out.saturated = true;
    return out;
  }
  const BasisAt b = basis_at(sol.branch, sol.lambda, t);
  out.y = sol.c1 * b.f1 + sol.c2 * b.f2;
  out.ydot = sol.c1 * b.df1 + sol.c2 * b.df2;
  return out;
}

std::string_view to_string(ModalBranch b) noexcept {
  switch (b) {
    case ModalBranch::ZeroBranch: return "ZeroBranch";
    case ModalBranch::PositiveRealBranch: return "PositiveRealBranch";
    case ModalBranch::NegativeRealBranch: return "NegativeRealBranch";
    case ModalBranch::ComplexBranch: return "ComplexBranch";
  }
  return "?";
}

}  // namespace nagd
