#include "nagd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nagd/linalg.hpp"

namespace nagd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_dim(const TrajectoryRecord& traj, std::size_t n, const char* what) {
  if (traj.dim() != n) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": dimension mismatch");
}

double quad_form(const Matrix& G, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < G.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < G.cols(); ++j) row += G(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

}  // namespace

ModalTrajectory modal_project(const TrajectoryRecord& traj, std::span<const Complex> w) {
  require_dim(traj, w.size(), "modal_project");
  ModalTrajectory out;
  out.times = traj.times();
  out.saturated = traj.saturated;
  out.y.reserve(traj.size());
  out.ydot.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.y.push_back(linalg::conj_dot(w, traj.q(k)));
    out.ydot.push_back(linalg::conj_dot(w, traj.v(k)));
  }
  return out;
}

double nullspace_limit(double t0, double y1_0, double y2_0) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "nullspace_limit: t0 must be positive");
  return y1_0 + 0.5 * t0 * y2_0;
}

FitWindow clip_window(FitWindow w, std::span<const double> times) {
  if (times.empty()) return w;
  return {std::max(w.t_a, times.front()), std::min(w.t_b, times.back())};
}

RateFit fit_rate(std::span<const double> times, std::span<const double> series, FitWindow window, FitKind kind,
                 bool envelope, double prefactor_exponent) {
  if (times.size() != series.size()) throw Error(ErrorCode::InvalidArgument, "fit_rate: length mismatch");
  if (!(window.t_b > window.t_a)) throw Error(ErrorCode::InvalidArgument, "fit_rate: empty window");

  const double slack = 1e-9 * std::max(1.0, std::abs(window.t_b));
  auto inside = [&](double t) { return t >= window.t_a - slack && t <= window.t_b + slack; };

  std::vector<std::size_t> idx;
  if (envelope) {
    for (std::size_t k = 1; k + 1 < series.size(); ++k) {
      if (!inside(times[k])) continue;
      const double m = std::abs(series[k]);
      if (m > std::abs(series[k - 1]) && m > std::abs(series[k + 1])) idx.push_back(k);
    }
  } else {
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (inside(times[k])) idx.push_back(k);
    }
  }
  if (idx.size() < 5) {
    throw Error(ErrorCode::InsufficientPoints, "fit_rate: fewer than 5 usable points in the window");
  }

  std::vector<double> xs, ys;
  xs.reserve(idx.size());
  ys.reserve(idx.size());
  for (std::size_t k : idx) {
    const double val = envelope ? std::abs(series[k]) : series[k];
    if (!(val > 0.0) || !std::isfinite(val)) {
      throw Error(ErrorCode::NonPositive, "fit_rate: non-positive value in the window");
    }
    const double t = times[k];
    xs.push_back(kind == FitKind::AlgebraicLogLog ? std::log(t) : t);
    ys.push_back(std::log(val) + prefactor_exponent * std::log(t));
  }

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientPoints, "fit_rate: degenerate abscissae");

  RateFit fit;
  fit.kind = kind;
  fit.window = window;
  fit.slope = sxy / sxx;
  fit.used_envelope = envelope;
  fit.points = xs.size();
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> derivative(std::span<const double> times, std::span<const double> f) {
  const std::size_t n = f.size();
  if (times.size() != n) throw Error(ErrorCode::InvalidArgument, "derivative: length mismatch");
  std::vector<double> d(n, kNaN);
  if (n < 3) return d;
  const double h = times[1] - times[0];
  for (std::size_t k = 2; k + 2 < n; ++k) {
    d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
  }
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  d[1] = (f[2] - f[0]) / (2.0 * h);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
  return d;
}

LyapunovSeries lyapunov_series(const TrajectoryRecord& traj, const Matrix& G) {
  require_dim(traj, G.rows(), "lyapunov_series");
  LyapunovSeries out;
  const std::size_t n = traj.dim();
  const Matrix Gt = G.transpose();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) asym += (G(i, j) - Gt(i, j)) * (G(i, j) - Gt(i, j));
  out.applicable = std::sqrt(asym) <= 1e-12 * std::max(1.0, linalg::frobenius_norm(G));

  Vector z(n);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.time(k);
    const auto q = traj.q(k);
    const auto v = traj.v(k);
    const double qGq = quad_form(G, q, q);
    for (std::size_t i = 0; i < n; ++i) z[i] = t * v[i] + 2.0 * q[i];
    out.V.push_back(0.5 * t * t * qGq + 0.5 * linalg::dot(z, z));
    out.Vdot_analytic.push_back(-t * qGq);
    out.asymmetry_residual.push_back(0.5 * t * t * (quad_form(Gt, v, q) - quad_form(G, v, q)));
  }
  out.Vdot_numeric = derivative(traj.times(), out.V);
  return out;
}

double max_relative_increase(std::span<const double> V) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < V.size(); ++k) {
    const double scale = std::max(std::abs(V[k]), std::numeric_limits<double>::min());
    worst = std::max(worst, (V[k + 1] - V[k]) / scale);
  }
  return worst;
}

double relative_rms(std::span<const double> a, std::span<const double> b, std::size_t skip) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "relative_rms: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = skip; k + skip < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

ChetaevState chetaev_negative(const TrajectoryRecord& traj, std::span<const double> v_eig, double mu) {
  require_dim(traj, v_eig.size(), "chetaev_negative");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "chetaev_negative: mu must be positive");
  ChetaevState s;
  s.mu = mu;
  const std::size_t m = traj.size();
  std::vector<double> logW(m, kNaN);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = traj.time(k);
    const double xi = linalg::dot(v_eig, traj.q(k));
    const double zeta = linalg::dot(v_eig, traj.v(k));
    const double W = xi * zeta + mu / 3.0 * xi * xi - xi * xi / (2.0 * t);
    s.xi.push_back(xi);
    s.zeta.push_back(zeta);
    s.W.push_back(W);
    s.in_omega.push_back(xi > 0.0 && zeta > mu * xi / 3.0);
    if (W > 0.0) logW[k] = std::log(W);
  }
  s.growth_ratio.assign(m, kNaN);
  if (m >= 2) {
    const auto& t = traj.times();
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == m ? k : k + 1;
      if (std::isnan(logW[lo]) || std::isnan(logW[hi])) continue;
      s.growth_ratio[k] = (logW[hi] - logW[lo]) / (t[hi] - t[lo]);
    }
  }
  return s;
}

ChetaevComplex chetaev_complex(const TrajectoryRecord& traj, std::span<const Complex> w, FitWindow window) {
  require_dim(traj, w.size(), "chetaev_complex");
  ChetaevComplex out;
  const std::size_t n = w.size();
  Vector u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = w[i].real();
    v[i] = w[i].imag();
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.rho.push_back(std::hypot(linalg::dot(u, traj.q(k)), linalg::dot(v, traj.q(k))));
  }
  try {
    out.rate_fit = fit_rate(traj.times(), out.rho, clip_window(window, traj.times()), FitKind::ExponentialSemilog,
                            false, 1.5);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientPoints && e.code() != ErrorCode::NonPositive &&
        e.code() != ErrorCode::InvalidArgument) {
      throw;
    }
  }
  return out;
}

Complex skew_product(Complex y, Complex ydot) { return y * std::conj(ydot) - ydot * std::conj(y); }

double energy_identity_residual(const ModalTrajectory& series, Complex lambda) {
  if (std::abs(lambda.imag()) <= 1e-12 * std::max(1.0, std::abs(lambda))) {
    throw Error(ErrorCode::NotApplicable, "energy_identity_residual: lambda is real");
  }
  const std::size_t m = series.times.size();
  if (series.y.size() != m || series.ydot.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "energy_identity_residual: length mismatch");
  }
  if (m < 5) throw Error(ErrorCode::InsufficientPoints, "energy_identity_residual: need at least 5 samples");

  // t^3 Q is purely imaginary; work with its imaginary part.
  std::vector<double> s(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = series.times[k];
    s[k] = t * t * t * skew_product(series.y[k], series.ydot[k]).imag();
  }
  const auto ds = derivative(series.times, s);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 2; k + 2 < m; ++k) {
    const double t = series.times[k];
    const double rhs = 2.0 * lambda.imag() * t * t * t * std::norm(series.y[k]);
    const double r = std::abs(ds[k] - rhs) / std::max(1.0, std::abs(rhs));
    acc += r * r;
    ++count;
  }
  return std::sqrt(acc / static_cast<double>(count));
}

std::vector<double> distance_to_nullspace(const TrajectoryRecord& traj, const Matrix& G) {
  require_dim(traj, G.rows(), "distance_to_nullspace");
  const Matrix N = linalg::null_space(G, 1e-10);
  if (N.cols() == 0) throw Error(ErrorCode::TrivialNullspace, "distance_to_nullspace: G has full rank");
  const std::size_t n = G.rows();
  std::vector<double> out;
  out.reserve(traj.size());
  Vector r(n);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto q = traj.q(k);
    std::copy(q.begin(), q.end(), r.begin());
    for (std::size_t j = 0; j < N.cols(); ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += N(i, j) * q[i];
      for (std::size_t i = 0; i < n; ++i) r[i] -= c * N(i, j);
    }
    out.push_back(linalg::norm2(r));
  }
  return out;
}

std::string_view to_string(FitKind k) noexcept {
  return k == FitKind::AlgebraicLogLog ? "AlgebraicLogLog" : "ExponentialSemilog";
}

}  // namespace nagd
