#include "nagd/dynamics.hpp"

#include <cmath>
#include <cstring>

#include "nagd/linalg.hpp"

namespace nagd {

void IntegratorConfig::validate() const {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw Error(ErrorCode::InvalidArgument, "integrator: t0 must be > 0");
  if (!(t_end > t0) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidArgument, "integrator: t_end must exceed t0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "integrator: dt must be > 0");
  if (!std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "integrator: r must be finite");
  if (record_stride == 0) throw Error(ErrorCode::InvalidArgument, "integrator: record_stride must be >= 1");
  if ((t_end - t0) / dt > 1e8) throw Error(ErrorCode::InvalidArgument, "integrator: more than 1e8 steps");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9));
}

std::vector<std::string> IntegratorConfig::warnings() const {
  std::vector<std::string> w;
  if (r <= 1.0) w.emplace_back("damping r <= 1: positive eigenvalues are no longer guaranteed to converge");
  if (r != 3.0) w.emplace_back("stability verdicts are only asserted for r = 3");
  return w;
}

double TrajectoryRecord::q_norm(std::size_t k) const { return linalg::norm2(q(k)); }

void TrajectoryRecord::push(double t, std::span<const double> q, std::span<const double> v) {
  times_.push_back(t);
  q_.insert(q_.end(), q.begin(), q.end());
  v_.insert(v_.end(), v.begin(), v.end());
}

std::uint64_t fingerprint(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dims[2] = {m.rows(), m.cols()};
  mix(dims, sizeof dims);
  for (double x : m.values()) mix(&x, sizeof x);
  return h;
}

namespace {

bool finite_state(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Classical RK4 for q' = v, v' = accel(t, q, v). Stage times t, t + h/2, t + h.
template <class Accel>
TrajectoryRecord integrate_second_order(std::span<const double> q0, std::span<const double> v0,
                                        const IntegratorConfig& cfg, Accel&& accel) {
  cfg.validate();
  const std::size_t n = q0.size();
  if (v0.size() != n) throw Error(ErrorCode::InvalidArgument, "simulate: q0 and v0 dimensions differ");
  if (!finite_state(q0) || !finite_state(v0)) throw Error(ErrorCode::InvalidArgument, "simulate: non-finite initial state");

  TrajectoryRecord rec(n);
  Vector q(q0.begin(), q0.end()), v(v0.begin(), v0.end());
  Vector qs(n), vs(n);
  Vector k1q(n), k1v(n), k2q(n), k2v(n), k3q(n), k3v(n), k4q(n), k4v(n);
  const double h = cfg.dt;
  const std::size_t steps = cfg.steps();

  rec.push(cfg.t0, q, v);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = cfg.t0 + static_cast<double>(k) * h;

    k1q = v;
    accel(t, q, v, k1v);
    for (std::size_t i = 0; i < n; ++i) {
      qs[i] = q[i] + 0.5 * h * k1q[i];
      vs[i] = v[i] + 0.5 * h * k1v[i];
    }
    k2q = vs;
    accel(t + 0.5 * h, qs, vs, k2v);
    for (std::size_t i = 0; i < n; ++i) {
      qs[i] = q[i] + 0.5 * h * k2q[i];
      vs[i] = v[i] + 0.5 * h * k2v[i];
    }
    k3q = vs;
    accel(t + 0.5 * h, qs, vs, k3v);
    for (std::size_t i = 0; i < n; ++i) {
      qs[i] = q[i] + h * k3q[i];
      vs[i] = v[i] + h * k3v[i];
    }
    k4q = vs;
    accel(t + h, qs, vs, k4v);
    for (std::size_t i = 0; i < n; ++i) {
      q[i] += h / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
      v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }

    if (!finite_state(q) || !finite_state(v) || linalg::norm2(q) > kOverflowNorm) {
      rec.saturated = true;
      break;
    }
    if ((k + 1) % cfg.record_stride == 0) {
      rec.push(cfg.t0 + static_cast<double>(k + 1) * h, q, v);
    }
  }
  rec.meta.config = cfg;
  return rec;
}

void check_dims(const Matrix& G, std::span<const double> b, std::size_t n) {
  if (!G.is_square() || G.rows() != n || b.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "simulate: dimension mismatch between G, b and the initial state");
  }
}

}  // namespace

TrajectoryRecord simulate_nagd(const Matrix& G, std::span<const double> b, std::span<const double> q0,
                               std::span<const double> v0, const IntegratorConfig& cfg) {
  check_dims(G, b, q0.size());
  const double r = cfg.r;
  auto rec = integrate_second_order(q0, v0, cfg, [&](double t, std::span<const double> q, std::span<const double> v,
                                                     std::span<double> out) {
    linalg::matvec(G, q, out);
    const double damp = r / t;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -damp * v[i] - (out[i] + b[i]);
  });
  rec.meta.fingerprint = fingerprint(G);
  rec.meta.kind = "nagd";
  return rec;
}

TrajectoryRecord simulate_smooth_nagd(const FieldFn& F, std::span<const double> x0, std::span<const double> v0,
                                      const IntegratorConfig& cfg) {
  const double r = cfg.r;
  auto rec = integrate_second_order(x0, v0, cfg, [&](double t, std::span<const double> q, std::span<const double> v,
                                                     std::span<double> out) {
    F(q, out);
    if (!finite_state(out)) throw Error(ErrorCode::NonFiniteField, "pseudo-gradient returned a non-finite value");
    const double damp = r / t;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -damp * v[i] - out[i];
  });
  rec.meta.kind = "smooth_nagd";
  return rec;
}

TrajectoryRecord simulate_first_order(const Matrix& G, std::span<const double> b, std::span<const double> x0,
                                      const IntegratorConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();
  check_dims(G, b, n);
  if (!finite_state(x0)) throw Error(ErrorCode::InvalidArgument, "simulate: non-finite initial state");

  auto field = [&](std::span<const double> x, std::span<double> out) {
    linalg::matvec(G, x, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = -(out[i] + b[i]);
  };

  TrajectoryRecord rec(n);
  Vector x(x0.begin(), x0.end()), xs(n), k1(n), k2(n), k3(n), k4(n), rate(n);
  const double h = cfg.dt;
  field(x, rate);
  rec.push(cfg.t0, x, rate);
  const std::size_t steps = cfg.steps();
  for (std::size_t k = 0; k < steps; ++k) {
    field(x, k1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
    field(xs, k2);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
    field(xs, k3);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + h * k3[i];
    field(xs, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!finite_state(x) || linalg::norm2(x) > kOverflowNorm) {
      rec.saturated = true;
      break;
    }
    if ((k + 1) % cfg.record_stride == 0) {
      field(x, rate);
      rec.push(cfg.t0 + static_cast<double>(k + 1) * h, x, rate);
    }
  }
  rec.meta = {cfg, fingerprint(G), "first_order"};
  return rec;
}

ModalTrajectory simulate_modal(Complex lambda, Complex y0, Complex ydot0, const IntegratorConfig& cfg) {
  cfg.validate();
  ModalTrajectory out;
  const double h = cfg.dt;
  const double r = cfg.r;
  auto acc = [&](double t, Complex y, Complex yd) { return -(r / t) * yd - lambda * y; };

  Complex y = y0, yd = ydot0;
  out.times.push_back(cfg.t0);
  out.y.push_back(y);
  out.ydot.push_back(yd);
  const std::size_t steps = cfg.steps();
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = cfg.t0 + static_cast<double>(k) * h;
    const Complex k1y = yd, k1v = acc(t, y, yd);
    const Complex k2y = yd + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, y + 0.5 * h * k1y, yd + 0.5 * h * k1v);
    const Complex k3y = yd + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, y + 0.5 * h * k2y, yd + 0.5 * h * k2v);
    const Complex k4y = yd + h * k3v, k4v = acc(t + h, y + h * k3y, yd + h * k3v);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yd += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(std::abs(y)) || !std::isfinite(std::abs(yd)) || std::abs(y) > kOverflowNorm) {
      out.saturated = true;
      break;
    }
    if ((k + 1) % cfg.record_stride == 0) {
      out.times.push_back(cfg.t0 + static_cast<double>(k + 1) * h);
      out.y.push_back(y);
      out.ydot.push_back(yd);
    }
  }
  return out;
}

Matrix finite_difference_jacobian(const FieldFn& F, std::span<const double> x_star, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite_difference_jacobian: h must be positive");
  const std::size_t n = x_star.size();
  Matrix jac(n, n);
  Vector xp(x_star.begin(), x_star.end()), xm = xp, fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    xp[j] = x_star[j] + h;
    xm[j] = x_star[j] - h;
    F(xp, fp);
    F(xm, fm);
    if (!finite_state(fp) || !finite_state(fm)) {
      throw Error(ErrorCode::NonFiniteField, "finite_difference_jacobian: non-finite field value");
    }
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    xp[j] = xm[j] = x_star[j];
  }
  return jac;
}

}  // namespace nagd
