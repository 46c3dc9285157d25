// Acceptance suite: one line per criterion, exit status 0 only if all pass.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nagd/analysis.hpp"
#include "nagd/dynamics.hpp"
#include "nagd/game.hpp"
#include "nagd/linalg.hpp"
#include "nagd/special.hpp"
#include "nagd/spectral.hpp"

using namespace nagd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Line {
  bool pass = true;
  std::string text;
  void check(bool ok, const char* fmt, double measured, double lo, double hi) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, measured, lo, hi);
    if (!text.empty()) text += "; ";
    text += buf;
    text += ok ? "" : " [X]";
    pass = pass && ok;
  }
  void range(const char* label, double m, double lo, double hi) {
    const bool ok = std::isfinite(m) && m >= lo && m <= hi;
    const std::string fmt = std::string(label) + " %.6g in [%.6g, %.6g]";
    check(ok, fmt.c_str(), m, lo, hi);
  }
  void upper(const char* label, double m, double hi) {
    const bool ok = std::isfinite(m) && m <= hi;
    const std::string fmt = std::string(label) + " %.3g <= %.3g%.0s";
    check(ok, fmt.c_str(), m, hi, 0.0);
  }
};

IntegratorConfig horizon(double t_end, double t0 = 1.0) {
  IntegratorConfig c;
  c.t0 = t0;
  c.t_end = t_end;
  c.dt = 0.01;
  return c;
}

std::vector<double> norms(const TrajectoryRecord& tr) {
  std::vector<double> n(tr.size());
  for (std::size_t k = 0; k < n.size(); ++k) n[k] = tr.q_norm(k);
  return n;
}

std::vector<double> component(const TrajectoryRecord& tr, std::size_t i) {
  std::vector<double> c(tr.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::abs(tr.q(k)[i]);
  return c;
}

// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Log-log slope through strict local maxima inside [a, b].
double envelope_slope(const std::vector<double>& t, const std::vector<double>& f, double a, double b) {
  std::vector<double> x, y;
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    if (t[k] < a || t[k] > b) continue;
    if (f[k] > f[k - 1] && f[k] > f[k + 1] && f[k] > 0) {
      x.push_back(std::log(t[k]));
      y.push_back(std::log(f[k]));
    }
  }
  if (x.size() < 5) return std::nan("");
  return ols_slope(x, y);
}

// Semilog slope of t^1.5 f(t) on [a, b] (removes the algebraic prefactor of the growing modes).
double growth_rate(const std::vector<double>& t, const std::vector<double>& f, double a, double b) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < a || t[k] > b || !(f[k] > 0)) continue;
    x.push_back(t[k]);
    y.push_back(std::log(f[k] * std::pow(t[k], 1.5)));
  }
  return x.size() < 5 ? std::nan("") : ols_slope(x, y);
}

double max_eig_mismatch(const Matrix& G, std::vector<double> quoted) {
  const Spectrum S = eigendecompose(G);
  std::vector<double> re;
  for (const auto& l : S.eigenvalues) re.push_back(l.real());
  std::sort(re.begin(), re.end());
  std::sort(quoted.begin(), quoted.end());
  if (re.size() != quoted.size()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (std::size_t i = 0; i < re.size(); ++i) worst = std::max(worst, std::abs(re[i] - quoted[i]));
  return worst;
}

double lyap_increase(const TrajectoryRecord& tr, const Matrix& G, double* rms) {
  const auto L = lyapunov_series(tr, G);
  *rms = relative_rms(L.Vdot_numeric, L.Vdot_analytic, 2);
  return max_relative_increase(L.V);
}

const Vector z2{0.0, 0.0};

Line c1() {
  Line l;
  const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
  l.upper("eig mismatch vs {0.317, 0.883}", max_eig_mismatch(G, {0.317, 0.883}), 0.005);
  const auto tr = simulate_nagd(G, z2, Vector{0.5, 0.3}, z2, horizon(100));
  l.range("envelope slope", envelope_slope(tr.times(), norms(tr), 30, 100), -1.7, -1.3);
  return l;
}

Line c2() {
  Line l;
  const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
  const auto tr = simulate_nagd(G, z2, Vector{1.0, 0.0}, z2, horizon(60));
  l.range("NAGD rate", growth_rate(tr.times(), norms(tr), 20, 60), 0.3041 * 0.9, 0.3041 * 1.1);
  const auto fo = simulate_first_order(G, z2, Vector{1.0, 0.0}, horizon(5));
  l.upper("||x(5)||/||x0||", fo.q_norm(fo.size() - 1) / fo.q_norm(0), std::exp(-24.0) * (1 + 1e-3));
  return l;
}

Line c3() {
  Line l;
  const Matrix G = Matrix::from_rows({{1.0, 0.0}, {0.0, -0.5}});
  const auto tr = simulate_nagd(G, z2, Vector{0.5, 0.1}, z2, horizon(100));
  const double r = std::sqrt(0.5);
  l.range("|x2| rate", growth_rate(tr.times(), component(tr, 1), 20, 60), r * 0.95, r * 1.05);
  l.range("|x1| envelope slope", envelope_slope(tr.times(), component(tr, 0), 30, 100), -1.7, -1.3);
  return l;
}

Line c4() {
  Line l;
  const Matrix G = Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}});
  const Vector q0{0.5, -0.3}, v0{0.1, 0.1};
  const auto tr = simulate_nagd(G, z2, q0, v0, horizon(100));
  // orthogonal projection onto span{(1,1)} gives the distance to the null space
  std::vector<double> dist(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) dist[k] = std::abs(tr.q(k)[0] + tr.q(k)[1]) / std::sqrt(2.0);
  l.range("distance envelope slope", envelope_slope(tr.times(), dist, 20, 100), -1.7, -1.3);
  const double s = 1.0 / std::sqrt(2.0);
  const double y1 = s * (q0[0] - q0[1]), y2 = s * (v0[0] - v0[1]);
  const auto qT = tr.q(tr.size() - 1);
  l.upper("null-coordinate limit error", std::abs(s * (qT[0] - qT[1]) - (y1 + 0.5 * y2)), 1e-3);
  return l;
}

Line c5() {
  Line l;
  const Matrix G3 = Matrix::from_rows({{1.0, 0.3, 0.2}, {0.3, 0.8, 0.25}, {0.2, 0.25, 0.6}});
  const Matrix G4 = Matrix::from_rows(
      {{1.2, 0.2, 0.15, 0.1}, {0.2, 0.9, 0.2, 0.15}, {0.15, 0.2, 0.7, 0.1}, {0.1, 0.15, 0.1, 0.5}});
  l.upper("3p eig mismatch", max_eig_mismatch(G3, {0.43, 0.62, 1.35}), 0.005);
  l.upper("4p eig mismatch", max_eig_mismatch(G4, {0.44, 0.58, 0.87, 1.41}), 0.005);
  const auto t3 = simulate_nagd(G3, Vector(3, 0.0), Vector{0.5, 0.3, -0.2}, Vector(3, 0.0), horizon(100));
  const auto t4 = simulate_nagd(G4, Vector(4, 0.0), Vector{0.5, 0.3, -0.2, 0.4}, Vector(4, 0.0), horizon(100));
  l.range("3p slope", envelope_slope(t3.times(), norms(t3), 30, 100), -1.7, -1.3);
  l.range("4p slope", envelope_slope(t4.times(), norms(t4), 30, 100), -1.7, -1.3);
  return l;
}

Line c6() {
  Line l;
  const Matrix G = Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
  const auto tr = simulate_nagd(G, z2, Vector{1.0, 0.0}, z2, horizon(60));
  const double r = std::sqrt(0.5);
  l.range("NAGD rate", growth_rate(tr.times(), norms(tr), 20, 60), r * 0.95, r * 1.05);
  const auto fo = simulate_first_order(G, z2, Vector{1.0, 0.0}, horizon(50));
  double worst = 0;
  for (std::size_t k = 0; k < fo.size(); ++k) worst = std::max(worst, std::abs(fo.q_norm(k) - 1.0));
  l.upper("first-order norm drift", worst, 1e-6);
  return l;
}

Line c7() {
  Line l;
  double worst = 0;
  for (Complex lambda : {Complex(0.317), Complex(0.883), Complex(1.0), Complex(-0.5), Complex(6.0, 1.5)}) {
    const auto m = simulate_modal(lambda, 1.0, 0.0, horizon(50));
    const auto sol = make_modal_solution(lambda, 1.0, 1.0, 0.0);
    double num = 0, den = 0;
    for (std::size_t k = 0; k < m.times.size(); ++k) {
      const Complex c = eval_modal(sol, m.times[k]).y;
      num = std::max(num, std::abs(m.y[k] - c));
      den = std::max(den, std::abs(c));
    }
    worst = std::max(worst, num / den);
  }
  l.upper("modal sup rel error", worst, 1e-5);
  double w = 0;
  for (Complex z : {Complex(0.5), Complex(3.0), Complex(12.0, 0.7), Complex(25.0, -2.0), Complex(1.2, 1.5)}) {
    const Complex dj = bessel_j0(z) - bessel_j1(z) / z, dy = bessel_y0(z) - bessel_y1(z) / z;
    const Complex W = bessel_j1(z) * dy - dj * bessel_y1(z);
    const Complex ref = 2.0 / (kPi * z);
    w = std::max(w, std::abs(W - ref) / std::abs(ref));
  }
  for (double x : {0.3, 2.0, 8.0, 20.0}) {
    const double di = bessel_i0(x) - bessel_i1(x) / x, dk = -bessel_k0(x) - bessel_k1(x) / x;
    const double W = bessel_i1(x) * dk - di * bessel_k1(x);
    w = std::max(w, std::abs(W + 1.0 / x) * x);
  }
  l.upper("Wronskian rel error", w, 1e-10);
  return l;
}

Line c8() {
  Line l;
  struct Run {
    Matrix G;
    Vector q0;
  };
  const std::vector<Run> runs{
      {Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}}), {0.5, 0.3}},
      {Matrix::from_rows({{1.0, 0.3, 0.2}, {0.3, 0.8, 0.25}, {0.2, 0.25, 0.6}}), {0.5, 0.3, -0.2}},
      {Matrix::from_rows({{1.2, 0.2, 0.15, 0.1}, {0.2, 0.9, 0.2, 0.15}, {0.15, 0.2, 0.7, 0.1}, {0.1, 0.15, 0.1, 0.5}}),
       {0.5, 0.3, -0.2, 0.4}}};
  double inc = -std::numeric_limits<double>::infinity(), rms = 0;
  for (const auto& r : runs) {
    const std::size_t n = r.q0.size();
    double rr = 0;
    inc = std::max(inc, lyap_increase(simulate_nagd(r.G, Vector(n, 0.0), r.q0, Vector(n, 0.0), horizon(100)), r.G, &rr));
    rms = std::max(rms, rr);
  }
  l.upper("max per-step V increase / V", inc, 1e-8);
  l.upper("Vdot relative RMS", rms, 1e-4);
  return l;
}

Line c9() {
  Line l;
  const double mu = std::sqrt(0.5), t0 = 6.0 / mu + 1.0;
  const auto tr = simulate_nagd(Matrix::from_rows({{-0.5}}), Vector{0.0}, Vector{1.0}, Vector{1.0}, horizon(t0 + 40, t0));
  const auto C = chetaev_negative(tr, Vector{1.0}, mu);
  std::size_t outside = 0;
  for (bool b : C.in_omega) outside += !b;
  double lo = std::numeric_limits<double>::infinity();
  for (double g : C.growth_ratio) lo = std::min(lo, g);
  l.upper("samples outside Omega", static_cast<double>(outside), 0.0);
  l.range("min d(log W)/dt", lo, mu / 6.0 - 1e-3, std::numeric_limits<double>::infinity());
  return l;
}

Line c10() {
  Line l;
  double worst = 0;
  for (Complex lambda : {Complex(0.0, 1.0), Complex(6.0, 1.5)}) {
    worst = std::max(worst, energy_identity_residual(simulate_modal(lambda, 1.0, 0.3, horizon(50)), lambda));
  }
  l.upper("identity residual", worst, 1e-5);
  l.upper("|Q(t0)| real data", std::abs(skew_product(0.7, -0.2)), 0.0);
  return l;
}

Line c11() {
  Line l;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t n = 3;
  Matrix A(n, n);
  for (double& x : A.values()) x = 0.6 * g(rng);
  Matrix G = linalg::matmul(A.transpose(), A);
  for (std::size_t i = 0; i < n; ++i) G(i, i) += 0.2;
  G(0, 1) += 0.3;
  G(1, 0) -= 0.3;
  Vector xs(n), q0(n), v0(n);
  for (auto* v : {&xs, &q0, &v0})
    for (double& x : *v) x = g(rng);
  Vector b = linalg::matvec(G, xs);
  for (double& x : b) x = -x;
  const auto affine = simulate_nagd(G, b, q0, v0, horizon(50));
  Vector shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = q0[i] - xs[i];
  const auto hom = simulate_nagd(G, Vector(n, 0.0), shifted, v0, horizon(50));
  double worst = 0;
  for (std::size_t k = 0; k < affine.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(affine.q(k)[i] - (hom.q(k)[i] + xs[i])));
  l.upper("max pointwise gap", worst, 1e-10);
  return l;
}

Line c12() {
  Line l;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double worst = 0;
  int made = 0;
  while (made < 20) {
    const std::size_t n = 2 + made % 3;
    Matrix P(n, n);
    for (double& x : P.values()) x = 0.4 * g(rng);
    for (std::size_t i = 0; i < n; ++i) P(i, i) += 1.0;
    if (!(linalg::condition_number(linalg::to_complex(P)) <= 100.0)) continue;
    const auto Pinv = linalg::inverse(P);
    if (!Pinv) continue;
    Vector eig(n);
    for (double& x : eig) x = u(rng);
    if (made % 4 == 0) eig[0] = 0.0;
    Matrix PD = P;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) PD(i, j) *= eig[j];
    const Matrix G = linalg::matmul(PD, *Pinv);
    const Spectrum S = eigendecompose(G);
    if (!S.is_diagonalizable || S.kappa_P > 100.0) continue;
    double lmin = std::numeric_limits<double>::infinity();
    for (double e : eig)
      if (e > 1e-9) lmin = std::min(lmin, e);
    const double C = std::isfinite(lmin) ? std::max(0.5, 1.0 / std::sqrt(lmin)) : 0.5;
    Vector q0(n), v0(n);
    for (double& x : q0) x = g(rng);
    for (double& x : v0) x = g(rng);
    const double bound = S.kappa_P * (linalg::norm2(q0) + C * linalg::norm2(v0));
    const auto tr = simulate_nagd(G, Vector(n, 0.0), q0, v0, horizon(50));
    double sup = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) sup = std::max(sup, tr.q_norm(k));
    worst = std::max(worst, sup / bound);
    ++made;
  }
  l.upper("max sup||q|| / bound", worst, 1.0 + 1e-6);
  return l;
}

Line c13() {
  Line l;
  const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
  const FieldFn F = [&](std::span<const double> x, std::span<double> out) {
    out[0] = 6.0 * x[0] + 1.5 * x[1] + x[0] * x[0] * x[0];
    out[1] = -1.5 * x[0] + 6.0 * x[1] - x[1] * x[1] * x[1];
  };
  const double r0 = 1e-3;
  const Vector x0{r0 * 0.6, r0 * 0.8};
  const auto tr = simulate_smooth_nagd(F, x0, z2, horizon(60));
  double peak = 0;
  for (std::size_t k = 0; k < tr.size(); ++k) peak = std::max(peak, tr.q_norm(k));
  l.range("peak ||x|| / ||x0||", peak / r0, 10.0, std::numeric_limits<double>::infinity());
  const Matrix J = finite_difference_jacobian(F, z2, 1e-5);
  double err = 0;
  for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(J.values()[i] - G.values()[i]));
  l.upper("Jacobian max abs error", err, 1e-8);
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria{
      {"symmetric PD spectrum and t^-3/2 decay", c1},
      {"complex reversal vs first-order", c2},
      {"negative eigenvalue growth", c3},
      {"semidefinite null-space limit", c4},
      {"multiplayer spectra and decay", c5},
      {"purely imaginary spectrum", c6},
      {"closed-form modal oracle", c7},
      {"Lyapunov dissipation", c8},
      {"Chetaev growth", c9},
      {"energy identity", c10},
      {"translation invariance", c11},
      {"boundedness bound", c12},
      {"smooth-game instability", c13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l.pass = false;
      l.text = std::string("exception: ") + e.what();
    }
    failed += !l.pass;
    std::printf("criterion %2zu %s: %s | %s\n", i + 1, l.pass ? "PASS" : "FAIL", criteria[i].first, l.text.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
