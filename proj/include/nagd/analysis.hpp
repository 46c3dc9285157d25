#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nagd/dynamics.hpp"
#include "nagd/matrix.hpp"

namespace nagd {

/// y(t) = w^* q(t), ydot(t) = w^* v(t) sample by sample.
ModalTrajectory modal_project(const TrajectoryRecord& traj, std::span<const Complex> w);

/// Limit of the null-space coordinate: y1(t0) + (t0/2) y2(t0).
double nullspace_limit(double t0, double y1_0, double y2_0);

enum class FitKind { AlgebraicLogLog, ExponentialSemilog };

struct FitWindow {
  double t_a = 0.0;
  double t_b = 0.0;
};

inline constexpr FitWindow kAlgebraicWindow{30.0, 100.0};
inline constexpr FitWindow kExponentialWindow{20.0, 60.0};

struct RateFit {
  FitKind kind = FitKind::AlgebraicLogLog;
  FitWindow window;
  double slope = 0.0;
  double r_squared = 0.0;
  bool used_envelope = false;
  std::size_t points = 0;
};

/// Least-squares slope of log(series) against log t or t on the window.
/// With `envelope`, only strict local maxima of |series| (3-point stencil)
/// are used. `prefactor_exponent` p fits t^p * series instead, which removes
/// the algebraic factor riding on exponential growth (p = 1.5 for the
/// modal Bessel growth e^{beta t} / t^{3/2}).
///
/// Throws InsufficientPoints (< 5 usable points) or NonPositive.
RateFit fit_rate(std::span<const double> times, std::span<const double> series, FitWindow window, FitKind kind,
                 bool envelope, double prefactor_exponent = 0.0);

/// Clip a window to the recorded time range (for truncated runs).
FitWindow clip_window(FitWindow w, std::span<const double> times);

struct LyapunovSeries {
  std::vector<double> V;
  std::vector<double> Vdot_analytic;  // -t q^T G q
  std::vector<double> Vdot_numeric;   // finite difference of V
  /// (t^2/2) v^T (G^T - G) q, the part of dV/dt the analytic term misses.
  std::vector<double> asymmetry_residual;
  bool applicable = true;  // false unless G is symmetric
};

/// V = (t^2/2) q^T G q + 0.5 |t v + 2 q|^2 along an r = 3 trajectory.
LyapunovSeries lyapunov_series(const TrajectoryRecord& traj, const Matrix& G);

/// max_k (V[k+1] - V[k]) / max(V[k], tiny); <= 0 means nonincreasing.
double max_relative_increase(std::span<const double> V);

/// sqrt(sum (a-b)^2 / sum b^2) over indices [skip, n - skip).
double relative_rms(std::span<const double> a, std::span<const double> b, std::size_t skip);

struct ChetaevState {
  double mu = 0.0;
  std::vector<double> xi;
  std::vector<double> zeta;
  std::vector<double> W;
  std::vector<bool> in_omega;
  /// d(log W)/dt by centered differences; NaN where W <= 0.
  std::vector<double> growth_ratio;
};

/// W = xi zeta + (mu/3) xi^2 - xi^2 / (2t) with xi = v^T q, zeta = v^T v.
ChetaevState chetaev_negative(const TrajectoryRecord& traj, std::span<const double> v_eig, double mu);

struct ChetaevComplex {
  std::vector<double> rho;
  std::optional<RateFit> rate_fit;
};

/// rho = sqrt((u^T q)^2 + (v^T q)^2) for w = u + i v; exponential fit of rho
/// (with the t^{3/2} prefactor) when the window holds enough positive data.
ChetaevComplex chetaev_complex(const TrajectoryRecord& traj, std::span<const Complex> w,
                               FitWindow window = kExponentialWindow);

/// Q = y conj(ydot) - ydot conj(y).
Complex skew_product(Complex y, Complex ydot);

/// RMS of |d/dt(t^3 Q) - 2i Im(lambda) t^3 |y|^2| / max(1, |rhs|) over the
/// interior samples. Throws NotApplicable for real lambda.
double energy_identity_residual(const ModalTrajectory& series, Complex lambda);

/// Euclidean distance of q(t) to the null space of G (SVD threshold
/// 1e-10 sigma_max). Throws TrivialNullspace for full-rank G.
std::vector<double> distance_to_nullspace(const TrajectoryRecord& traj, const Matrix& G);

/// Five-point centered derivative of a uniformly sampled series; the two
/// samples at each end fall back to second-order one-sided stencils.
std::vector<double> derivative(std::span<const double> times, std::span<const double> f);

std::string_view to_string(FitKind k) noexcept;

}  // namespace nagd
