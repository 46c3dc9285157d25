#include "nagd/game.hpp"

#include <cmath>
#include <string>

#include "nagd/linalg.hpp"

namespace nagd {

void QuadraticGame::validate() const {
  const std::size_t n = Q.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "game: at least one player required");
  if (d.size() != n) throw Error(ErrorCode::InvalidArgument, "game: expected one linear term per player");
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix& q = Q[i];
    if (q.rows() != n || q.cols() != n) {
      throw Error(ErrorCode::InvalidArgument, "game: Q_" + std::to_string(i + 1) + " must be N x N");
    }
    if (d[i].size() != n) {
      throw Error(ErrorCode::InvalidArgument, "game: d_" + std::to_string(i + 1) + " must have length N");
    }
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) {
        if (std::abs(q(r, c) - q(c, r)) > 1e-12) {
          throw Error(ErrorCode::InvalidArgument, "game: Q_" + std::to_string(i + 1) + " is not symmetric");
        }
      }
  }
}

Vector PseudoGradientSystem::evaluate(std::span<const double> x) const {
  Vector f = linalg::matvec(G, x);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += b[i];
  return f;
}

PseudoGradientSystem pseudo_gradient(const QuadraticGame& game) {
  game.validate();
  const std::size_t n = game.n_players();
  PseudoGradientSystem sys{Matrix(n, n), Vector(n, 0.0), std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sys.G(i, j) = 2.0 * game.Q[i](i, j);
    sys.b[i] = game.d[i][i];
  }
  return sys;
}

Vector solve_equilibrium(PseudoGradientSystem& sys) {
  const std::size_t n = sys.G.rows();
  if (!sys.G.is_square() || sys.b.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "solve_equilibrium: dimension mismatch");
  }
  Vector neg_b(n);
  for (std::size_t i = 0; i < n; ++i) neg_b[i] = -sys.b[i];
  Vector x = linalg::min_norm_solve(sys.G, neg_b, 1e-12);
  const Vector r = sys.evaluate(x);
  const double bound = 1e-8 * std::max(1.0, linalg::norm2(sys.b));
  if (linalg::norm2(r) > bound) {
    throw Error(ErrorCode::NoEquilibrium, "solve_equilibrium: b is not in range(G)");
  }
  sys.equilibrium = x;
  return x;
}

HomogeneousProblem translate_to_homogeneous(const PseudoGradientSystem& sys, std::span<const double> q0,
                                            std::span<const double> v0) {
  if (!sys.equilibrium) throw Error(ErrorCode::NoEquilibrium, "translate_to_homogeneous: no equilibrium solved");
  const std::size_t n = sys.G.rows();
  if (q0.size() != n || v0.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "translate_to_homogeneous: dimension mismatch");
  }
  HomogeneousProblem h{sys.G, Vector(n), Vector(v0.begin(), v0.end())};
  for (std::size_t i = 0; i < n; ++i) h.q0[i] = q0[i] - (*sys.equilibrium)[i];
  return h;
}

}  // namespace nagd
