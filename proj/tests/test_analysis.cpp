#include <doctest.h>

#include <cmath>
#include <limits>

#include "nagd/analysis.hpp"
#include "nagd/dynamics.hpp"
#include "nagd/spectral.hpp"

using namespace nagd;

namespace {

const Vector z2{0.0, 0.0};

IntegratorConfig run(double t_end, double t0 = 1.0) {
  IntegratorConfig c;
  c.t0 = t0;
  c.t_end = t_end;
  return c;
}

std::vector<double> norms(const TrajectoryRecord& tr) {
  std::vector<double> n;
  for (std::size_t k = 0; k < tr.size(); ++k) n.push_back(tr.q_norm(k));
  return n;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("rate fits on synthetic series") {
  std::vector<double> t, p, e, osc;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(1.0 + 0.05 * k);
    p.push_back(std::pow(t.back(), -1.5));
    e.push_back(std::exp(0.707 * t.back()));
    osc.push_back(std::pow(t.back(), -1.5) * (1.5 + std::cos(3.0 * t.back())));
  }
  const auto a = fit_rate(t, p, {30, 100}, FitKind::AlgebraicLogLog, false);
  CHECK(a.slope == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(a.r_squared > 0.9999);
  const auto x = fit_rate(t, e, {20, 60}, FitKind::ExponentialSemilog, false);
  CHECK(std::abs(x.slope - 0.707) < 1e-6);
  const auto env = fit_rate(t, osc, {30, 100}, FitKind::AlgebraicLogLog, true);
  CHECK(env.used_envelope);
  CHECK(env.slope == doctest::Approx(-1.5).epsilon(0.02));
  // prefactor removal: t^-1.5 e^{0.3 t} is a pure exponential after multiplying by t^1.5
  std::vector<double> g;
  for (double s : t) g.push_back(std::pow(s, -1.5) * std::exp(0.3 * s));
  CHECK(fit_rate(t, g, {20, 60}, FitKind::ExponentialSemilog, false, 1.5).slope == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("rate fit errors") {
  std::vector<double> t{1, 2, 3, 4, 5, 6}, y{1, 1, 0, 1, 1, 1};
  CHECK(code_of([&] { fit_rate(t, y, {1, 6}, FitKind::AlgebraicLogLog, false); }) == ErrorCode::NonPositive);
  CHECK(code_of([&] { fit_rate(t, y, {1, 3}, FitKind::AlgebraicLogLog, false); }) == ErrorCode::InsufficientPoints);
  std::vector<double> smooth{6, 5, 4, 3, 2, 1};
  CHECK(code_of([&] { fit_rate(t, smooth, {1, 6}, FitKind::AlgebraicLogLog, true); }) ==
        ErrorCode::InsufficientPoints);
  CHECK(code_of([&] { fit_rate(t, smooth, {6, 1}, FitKind::AlgebraicLogLog, false); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("simulated rates: symmetric decay and complex growth") {
  const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
  const auto tr = simulate_nagd(G, z2, Vector{0.5, 0.3}, z2, run(100));
  const auto f = fit_rate(tr.times(), norms(tr), kAlgebraicWindow, FitKind::AlgebraicLogLog, true);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(0.2 / 1.5));

  const Matrix C = Matrix::from_rows({{6, 1.5}, {-1.5, 6}});
  const auto cx = simulate_nagd(C, z2, Vector{1, 0}, z2, run(60));
  const auto g = fit_rate(cx.times(), norms(cx), kExponentialWindow, FitKind::ExponentialSemilog, false, 1.5);
  CHECK(g.slope == doctest::Approx(0.304).epsilon(0.1));
}

TEST_CASE("modal projection and null-space dynamics") {
  const Matrix G = Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}});
  const auto tr = simulate_nagd(G, z2, Vector{0.5, -0.3}, Vector{0.1, 0.2}, run(100));
  const auto e1 = modal_project(tr, CVector{1.0, 0.0});
  for (std::size_t k = 0; k < tr.size(); k += 97) CHECK(e1.y[k].real() == tr.q(k)[0]);

  const double s = 1 / std::sqrt(2.0);
  const auto y = modal_project(tr, CVector{s, -s});
  double worst = 0;
  for (std::size_t k = 0; k < y.times.size(); ++k) {
    const Complex law = std::pow(1.0 / y.times[k], 3) * y.ydot[0];
    worst = std::max(worst, std::abs(y.ydot[k] - law));
  }
  CHECK(worst < 1e-6);
  CHECK(nullspace_limit(1, 0, 0) == 0.0);
  CHECK(nullspace_limit(1, 0.2, 0.1) == doctest::Approx(0.25));
  CHECK(std::abs(y.y.back().real() - nullspace_limit(1, y.y[0].real(), y.ydot[0].real())) < 1e-3);

  const auto d = distance_to_nullspace(tr, G);
  for (std::size_t k = 0; k < tr.size(); k += 101) {
    CHECK(d[k] == doctest::Approx(std::abs(tr.q(k)[0] + tr.q(k)[1]) * s).epsilon(1e-10));
  }
  const auto fit = fit_rate(tr.times(), d, {20, 100}, FitKind::AlgebraicLogLog, true);
  CHECK(std::abs(fit.slope + 1.5) <= 0.2);

  const auto in_null = simulate_nagd(G, z2, Vector{1, -1}, z2, run(10));
  for (double x : distance_to_nullspace(in_null, G)) CHECK(x < 1e-15);
  CHECK(code_of([&] { distance_to_nullspace(in_null, Matrix::identity(2)); }) == ErrorCode::TrivialNullspace);
}

TEST_CASE("left-eigenvector projection satisfies the modal equation") {
  const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
  const Spectrum S = eigendecompose(G);
  const auto tr = simulate_nagd(G, z2, Vector{0.5, 0.3}, z2, run(50));
  for (std::size_t i = 0; i < 2; ++i) {
    const auto y = modal_project(tr, S.left_vector(i));
    std::vector<double> re(y.y.size()), dre(y.y.size());
    for (std::size_t k = 0; k < re.size(); ++k) re[k] = y.y[k].real(), dre[k] = y.ydot[k].real();
    const auto ydd = derivative(y.times, dre);
    double worst = 0;
    for (std::size_t k = 2; k + 2 < re.size(); ++k) {
      const double lam = S.eigenvalues[i].real();
      worst = std::max(worst, std::abs(ydd[k] + 3.0 / y.times[k] * dre[k] + lam * re[k]));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("Lyapunov diagnostic") {
  const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
  const auto zero = lyapunov_series(simulate_nagd(G, z2, z2, z2, run(10)), G);
  for (double v : zero.V) CHECK(v == 0.0);

  const auto tr = simulate_nagd(G, z2, Vector{0.5, 0.3}, z2, run(100));
  const auto L = lyapunov_series(tr, G);
  CHECK(L.applicable);
  CHECK(max_relative_increase(L.V) <= 1e-8);
  CHECK(relative_rms(L.Vdot_numeric, L.Vdot_analytic, 2) <= 1e-4);
  // V(t0) = t0^2/2 q^T G q + |t0 v + 2 q|^2 / 2 with v = 0
  const double qGq = 0.4 * 0.25 + 2 * 0.2 * 0.15 + 0.8 * 0.09;
  CHECK(L.V[0] == doctest::Approx(0.5 * qGq + 0.5 * 4 * 0.34).epsilon(1e-14));
  CHECK(L.Vdot_analytic[0] == doctest::Approx(-qGq).epsilon(1e-14));

  const Matrix K = Matrix::from_rows({{0, 1}, {-1, 0}});
  const auto S = lyapunov_series(simulate_nagd(K, z2, Vector{1, 0}, z2, run(20)), K);
  CHECK_FALSE(S.applicable);
  double mx = 0;
  for (double x : S.asymmetry_residual) mx = std::max(mx, std::abs(x));
  CHECK(mx > 1.0);
}

TEST_CASE("Chetaev function for a negative eigenvalue") {
  const double mu = std::sqrt(0.5), t0 = 6 / mu + 1;
  CHECK(t0 == doctest::Approx(9.485).epsilon(1e-4));
  const auto tr = simulate_nagd(Matrix::from_rows({{-0.5}}), Vector{0}, Vector{1}, Vector{1}, run(t0 + 40, t0));
  const auto C = chetaev_negative(tr, Vector{1.0}, mu);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < C.W.size(); ++k) {
    CHECK(C.in_omega[k]);
    lo = std::min(lo, C.growth_ratio[k]);
  }
  CHECK(lo >= mu / 6 - 1e-3);
  const double T = tr.times().back();
  CHECK(C.W.back() / C.W.front() >= std::exp(mu / 6 * (T - t0)));

  const auto out = simulate_nagd(Matrix::from_rows({{-0.5}}), Vector{0}, Vector{-1}, Vector{0}, run(t0 + 5, t0));
  const auto D = chetaev_negative(out, Vector{1.0}, mu);
  CHECK_FALSE(D.in_omega.front());
}

TEST_CASE("Chetaev-type function for complex eigenvalues") {
  for (const auto& [G, beta] : {std::pair{Matrix::from_rows({{6, 1.5}, {-1.5, 6}}), 0.30386},
                                std::pair{Matrix::from_rows({{0, 1}, {-1, 0}}), std::sqrt(0.5)}}) {
    const Spectrum S = eigendecompose(G);
    const std::size_t i = S.eigenvalues[0].imag() > 0 ? 0 : 1;
    const auto C = chetaev_complex(simulate_nagd(G, z2, Vector{1, 0}, z2, run(60)), S.left_vector(i));
    REQUIRE(C.rate_fit.has_value());
    CHECK(C.rate_fit->slope == doctest::Approx(beta).epsilon(0.1));
  }
  const Matrix G = Matrix::from_rows({{6, 1.5}, {-1.5, 6}});
  const Spectrum S = eigendecompose(G);
  const auto C = chetaev_complex(simulate_nagd(G, z2, z2, z2, run(20)), S.left_vector(0));
  for (double r : C.rho) CHECK(r <= 1e-6);
}

TEST_CASE("energy identity") {
  CHECK(skew_product(0.4, -1.3) == Complex(0.0));
  for (Complex lambda : {Complex(0, 1), Complex(6, 1.5)}) {
    const auto m = simulate_modal(lambda, 1.0, 0.3, run(50));
    CHECK(energy_identity_residual(m, lambda) <= 1e-5);
  }
  ModalTrajectory zero;
  for (int k = 0; k < 50; ++k) {
    zero.times.push_back(1 + 0.01 * k);
    zero.y.push_back(0.0);
    zero.ydot.push_back(0.0);
  }
  CHECK(energy_identity_residual(zero, Complex(0, 1)) == 0.0);
  CHECK(code_of([&] { energy_identity_residual(zero, Complex(0.5, 0)); }) == ErrorCode::NotApplicable);
}

TEST_CASE("five-point derivative") {
  std::vector<double> t, f;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(1 + 0.01 * k);
    f.push_back(std::sin(t.back()));
  }
  const auto d = derivative(t, f);
  for (std::size_t k = 2; k + 2 < t.size(); ++k) CHECK(std::abs(d[k] - std::cos(t[k])) < 1e-9);
  CHECK(std::abs(d.front() - std::cos(t.front())) < 1e-4);
  CHECK(std::abs(d.back() - std::cos(t.back())) < 1e-4);
}
