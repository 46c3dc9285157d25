#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nagd/matrix.hpp"

namespace nagd {

struct IntegratorConfig {
  double t0 = 1.0;
  double t_end = 100.0;
  double dt = 0.01;
  double r = 3.0;  // damping coefficient in (r/t) v
  std::size_t record_stride = 1;

  /// Throws InvalidArgument for t0 <= 0, t_end <= t0, dt <= 0, stride 0 or
  /// more than 1e8 steps.
  void validate() const;
  /// Number of RK4 steps from t0 to t_end.
  std::size_t steps() const;
  /// Soft diagnostics (e.g. r <= 1) that do not prevent a run.
  std::vector<std::string> warnings() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

inline constexpr double kOverflowNorm = 1e150;

struct TrajectoryMeta {
  IntegratorConfig config;
  std::uint64_t fingerprint = 0;  // FNV-1a over the system matrix bytes
  std::string kind;               // "nagd", "first_order", "smooth_nagd"
};

/// Sampled real trajectory: row k holds q(t_k) and v(t_k).
class TrajectoryRecord {
 public:
  TrajectoryRecord() = default;
  explicit TrajectoryRecord(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  double time(std::size_t k) const { return times_[k]; }
  std::span<const double> q(std::size_t k) const { return {q_.data() + k * dim_, dim_}; }
  std::span<const double> v(std::size_t k) const { return {v_.data() + k * dim_, dim_}; }
  double q_norm(std::size_t k) const;

  bool saturated = false;
  TrajectoryMeta meta;

  void push(double t, std::span<const double> q, std::span<const double> v);

 private:
  std::size_t dim_ = 0;
  std::vector<double> times_;
  std::vector<double> q_;
  std::vector<double> v_;
};

/// Sampled complex scalar trajectory of the modal equation.
struct ModalTrajectory {
  std::vector<double> times;
  CVector y;
  CVector ydot;
  bool saturated = false;
};

/// F(x) written into out; both spans have the system dimension.
using FieldFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// RK4 on q' = v, v' = -(r/t) v - (G q + b), damping evaluated at the stage times.
TrajectoryRecord simulate_nagd(const Matrix& G, std::span<const double> b, std::span<const double> q0,
                               std::span<const double> v0, const IntegratorConfig& cfg);

/// RK4 on x' = -(G x + b); the v channel records x'.
TrajectoryRecord simulate_first_order(const Matrix& G, std::span<const double> b, std::span<const double> x0,
                                      const IntegratorConfig& cfg);

/// RK4 on y'' + (r/t) y' + lambda y = 0 for complex y.
ModalTrajectory simulate_modal(Complex lambda, Complex y0, Complex ydot0, const IntegratorConfig& cfg);

/// RK4 on x'' = -(r/t) x' - F(x). Throws NonFiniteField if F yields a
/// non-finite value.
TrajectoryRecord simulate_smooth_nagd(const FieldFn& F, std::span<const double> x0, std::span<const double> v0,
                                      const IntegratorConfig& cfg);

/// Central-difference Jacobian, column j = (F(x + h e_j) - F(x - h e_j)) / 2h.
Matrix finite_difference_jacobian(const FieldFn& F, std::span<const double> x_star, double h);

std::uint64_t fingerprint(const Matrix& m);

}  // namespace nagd
