#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nagd/matrix.hpp"

namespace nagd {

/// N-player quadratic game with scalar actions: J_i(x) = x^T Q_i x + d_i^T x.
struct QuadraticGame {
  std::vector<Matrix> Q;  // N symmetric N x N matrices
  std::vector<Vector> d;  // N vectors of length N

  std::size_t n_players() const noexcept { return Q.size(); }
  /// Throws InvalidArgument on dimension mismatch or asymmetric Q_i.
  void validate() const;

  friend bool operator==(const QuadraticGame&, const QuadraticGame&) = default;
};

/// Affine pseudo-gradient F(x) = G x + b, plus an equilibrium once solved.
struct PseudoGradientSystem {
  Matrix G;
  Vector b;
  std::optional<Vector> equilibrium;

  Vector evaluate(std::span<const double> x) const;
};

/// G_ij = 2 (Q_i)_ij, b_i = (d_i)_i.
PseudoGradientSystem pseudo_gradient(const QuadraticGame& game);

/// Minimum-norm x* with G x* + b = 0; stored into `sys`. Throws NoEquilibrium
/// when b is not in range(G) (residual above 1e-8 * max(1, ||b||)).
Vector solve_equilibrium(PseudoGradientSystem& sys);

struct HomogeneousProblem {
  Matrix G;
  Vector q0;  // q0 - x*
  Vector v0;
};

/// Shift to the equilibrium; requires sys.equilibrium (NoEquilibrium otherwise).
HomogeneousProblem translate_to_homogeneous(const PseudoGradientSystem& sys, std::span<const double> q0,
                                            std::span<const double> v0);

}  // namespace nagd
