#include <doctest.h>

#include <cmath>
#include <random>

#include "nagd/dynamics.hpp"
#include "nagd/game.hpp"
#include "nagd/linalg.hpp"

using namespace nagd;

namespace {

Matrix half_identity() { return Matrix::from_rows({{0.5, 0.0}, {0.0, 0.5}}); }

// d/dx_i of x^T Q_i x + d_i^T x by central differences.
Vector numeric_pseudo_gradient(const QuadraticGame& g, const Vector& x) {
  const std::size_t n = x.size();
  Vector out(n);
  const double h = 1e-4;
  auto cost = [&](std::size_t i, const Vector& y) {
    return linalg::dot(y, linalg::matvec(g.Q[i], y)) + linalg::dot(g.d[i], y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    Vector p = x, m = x;
    p[i] += h;
    m[i] -= h;
    out[i] = (cost(i, p) - cost(i, m)) / (2 * h);
  }
  return out;
}

}  // namespace

TEST_CASE("pseudo-gradient of decoupled quadratics") {
  const auto sys = pseudo_gradient({{half_identity(), half_identity()}, {Vector{0, 0}, Vector{0, 0}}});
  CHECK(sys.G == Matrix::identity(2));
  CHECK(sys.b == Vector{0, 0});
}

TEST_CASE("pseudo-gradient recovers the symmetric and skew examples") {
  const QuadraticGame sym{{Matrix::from_rows({{0.2, 0.1}, {0.1, 0.0}}), Matrix::from_rows({{0.0, 0.1}, {0.1, 0.4}})},
                          {Vector{0, 0}, Vector{0, 0}}};
  const auto a = pseudo_gradient(sym);
  CHECK(a.G == Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}}));

  const QuadraticGame zs{{Matrix::from_rows({{0.0, 0.5}, {0.5, 0.0}}), Matrix::from_rows({{0.0, -0.5}, {-0.5, 0.0}})},
                         {Vector{0, 0}, Vector{0, 0}}};
  CHECK(pseudo_gradient(zs).G == Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}}));
}

TEST_CASE("pseudo-gradient agrees with differentiated costs") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    QuadraticGame game;
    for (std::size_t i = 0; i < n; ++i) {
      Matrix Q(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c) Q(r, c) = Q(c, r) = g(rng);
      Vector d(n);
      for (double& x : d) x = g(rng);
      game.Q.push_back(Q);
      game.d.push_back(d);
    }
    const auto sys = pseudo_gradient(game);
    Vector x(n);
    for (double& v : x) v = g(rng);
    const Vector exact = sys.evaluate(x), num = numeric_pseudo_gradient(game, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(exact[i] - num[i]) < 1e-8);
  }
}

TEST_CASE("potential game is symmetric") {
  // J_i = x^T P x for every player gives G = 2P
  const Matrix P = Matrix::from_rows({{1.0, 0.3}, {0.3, 2.0}});
  const auto sys = pseudo_gradient({{P, P}, {Vector{0, 0}, Vector{0, 0}}});
  CHECK(sys.G == sys.G.transpose());
}

TEST_CASE("game validation") {
  CHECK_THROWS_AS(pseudo_gradient({{Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}}), half_identity()},
                                   {Vector{0, 0}, Vector{0, 0}}}),
                  Error);
  CHECK_THROWS_AS(pseudo_gradient({{half_identity()}, {Vector{0, 0}}}), Error);
  CHECK_THROWS_AS(pseudo_gradient({{}, {}}), Error);
}

TEST_CASE("equilibria") {
  PseudoGradientSystem a{Matrix::identity(2), {1.0, 2.0}, {}};
  const Vector xa = solve_equilibrium(a);
  CHECK(std::abs(xa[0] + 1.0) < 1e-14);
  CHECK(std::abs(xa[1] + 2.0) < 1e-14);
  REQUIRE(a.equilibrium.has_value());

  PseudoGradientSystem bad{Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}), {0.0, 1.0}, {}};
  try {
    solve_equilibrium(bad);
    FAIL("expected NoEquilibrium");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEquilibrium);
  }

  PseudoGradientSystem c{Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}}), {0.1, -0.2}, {}};
  const Vector xc = solve_equilibrium(c);
  // Cramer's rule
  const double det = 0.4 * 0.8 - 0.2 * 0.2;
  CHECK(std::abs(xc[0] - (-0.1 * 0.8 - 0.2 * 0.2) / det) < 1e-14);
  CHECK(std::abs(xc[1] - (0.4 * 0.2 - 0.2 * -0.1) / det) < 1e-14);
  const Vector r = c.evaluate(xc);
  CHECK(linalg::norm2(r) < 1e-12);

  // singular but consistent: minimum-norm solution
  PseudoGradientSystem s{Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}}), {-0.5, -0.5}, {}};
  const Vector xs = solve_equilibrium(s);
  CHECK(std::abs(xs[0] - 1.0) < 1e-12);
  CHECK(std::abs(xs[1] - 1.0) < 1e-12);
}

TEST_CASE("translation to homogeneous form") {
  PseudoGradientSystem zero{Matrix::identity(2), {0.0, 0.0}, {}};
  solve_equilibrium(zero);
  const auto h0 = translate_to_homogeneous(zero, Vector{0.3, -0.1}, Vector{1.0, 2.0});
  CHECK(h0.q0 == Vector{0.3, -0.1});
  CHECK(h0.v0 == Vector{1.0, 2.0});

  PseudoGradientSystem s{Matrix::identity(2), {1.0, 0.0}, {}};
  solve_equilibrium(s);
  const auto h = translate_to_homogeneous(s, Vector{0.0, 0.0}, Vector{0.0, 0.0});
  CHECK(std::abs(h.q0[0] - 1.0) < 1e-15);
  CHECK(std::abs(h.q0[1]) < 1e-15);

  PseudoGradientSystem none{Matrix::identity(2), {1.0, 0.0}, {}};
  CHECK_THROWS_AS(translate_to_homogeneous(none, Vector{0, 0}, Vector{0, 0}), Error);
}

TEST_CASE("affine trajectory is a shifted homogeneous one") {
  PseudoGradientSystem s{Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}}), {0.1, -0.2}, {}};
  const Vector xs = solve_equilibrium(s);
  const Vector q0{0.5, 0.3}, v0{0.0, 0.1};
  IntegratorConfig cfg;
  cfg.t_end = 40;
  const auto aff = simulate_nagd(s.G, s.b, q0, v0, cfg);
  const auto h = translate_to_homogeneous(s, q0, v0);
  const auto hom = simulate_nagd(h.G, Vector{0, 0}, h.q0, h.v0, cfg);
  REQUIRE(aff.size() == hom.size());
  double worst = 0;
  for (std::size_t k = 0; k < aff.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(aff.q(k)[i] - hom.q(k)[i] - xs[i]));
  CHECK(worst < 1e-10);
}
