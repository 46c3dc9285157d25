#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "nagd/analysis.hpp"
#include "nagd/experiment.hpp"
#include "nagd/linalg.hpp"
#include "nagd/special.hpp"

namespace nagd {

namespace {

constexpr double kPi = std::numbers::pi;

class Suite {
 public:
  explicit Suite(double dt) : dt_(dt) {}

  double dt() const { return dt_; }

  IntegratorConfig cfg(double t_end, double t0 = 1.0) const {
    IntegratorConfig c;
    c.t0 = t0;
    c.t_end = t_end;
    c.dt = dt_;
    return c;
  }

  // measured <= threshold passes.
  void upper(std::string name, double measured, double threshold, std::string detail = {}) {
    const bool ok = std::isfinite(measured) && measured <= threshold;
    results_.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, measured, threshold,
                        std::move(detail)});
  }

  void flag(std::string name, bool ok, double measured, double threshold, std::string detail = {}) {
    results_.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, measured, threshold,
                        std::move(detail)});
  }

  void not_applicable(std::string name, double measured, std::string detail) {
    results_.push_back({std::move(name), CheckStatus::NotApplicable, measured, 0.0, std::move(detail)});
  }

  // Runs `body`; an exception becomes a failed entry named `name`.
  template <class F>
  void guard(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      results_.push_back({name, CheckStatus::Fail, std::nan(""), 0.0, std::string("exception: ") + e.what()});
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  double dt_;
  std::vector<CheckResult> results_;
};

Complex j1_prime(Complex z) { return bessel_j0(z) - bessel_j1(z) / z; }
Complex y1_prime(Complex z) { return bessel_y0(z) - bessel_y1(z) / z; }

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (double& x : m.values()) x = g(rng);
  return m;
}

// P D P^{-1} with kappa(P) <= kappa_max; eigenvalues drawn from `eig`.
Matrix similar_to_diagonal(std::mt19937_64& rng, const Vector& eig, double kappa_max) {
  const std::size_t n = eig.size();
  for (;;) {
    Matrix P = random_matrix(rng, n, 0.4);
    for (std::size_t i = 0; i < n; ++i) P(i, i) += 1.0;
    const double k = linalg::condition_number(linalg::to_complex(P));
    if (!(k <= kappa_max)) continue;
    const auto Pinv = linalg::inverse(P);
    if (!Pinv) continue;
    Matrix PD = P;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) PD(i, j) *= eig[j];
    return linalg::matmul(PD, *Pinv);
  }
}

double sup_rel(const CVector& a, const CVector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(b[k]));
  }
  return den > 0.0 ? num / den : num;
}

void special_checks(Suite& s) {
  s.guard("wronskian_j1_y1", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const Complex z = 0.1 + (50.0 - 0.1) * k / 100.0;
      const Complex w = bessel_j1(z) * y1_prime(z) - j1_prime(z) * bessel_y1(z);
      worst = std::max(worst, std::abs(w - 2.0 / (kPi * z)) / std::abs(2.0 / (kPi * z)));
    }
    for (double re = 0.5; re <= 30.0; re += 2.5) {
      for (double im = -4.0; im <= 4.0; im += 1.0) {
        const Complex z(re, im);
        const Complex w = bessel_j1(z) * y1_prime(z) - j1_prime(z) * bessel_y1(z);
        worst = std::max(worst, std::abs(w - 2.0 / (kPi * z)) / std::abs(2.0 / (kPi * z)));
      }
    }
    s.upper("wronskian_j1_y1", worst, 1e-10, "max relative deviation from 2/(pi z)");
  });
  s.guard("wronskian_i1_k1", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double x = 0.1 + (30.0 - 0.1) * k / 100.0;
      const double i1 = bessel_i1(x), k1 = bessel_k1(x);
      const double di = bessel_i0(x) - i1 / x, dk = -bessel_k0(x) - k1 / x;
      worst = std::max(worst, std::abs((i1 * dk - di * k1) + 1.0 / x) * x);
    }
    s.upper("wronskian_i1_k1", worst, 1e-10, "max relative deviation from -1/x");
  });
  s.guard("connection_j1_i1", [&] {
    double worst = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double x = 0.2 * k;
      const Complex lhs = bessel_j1(Complex(0.0, x));
      const Complex rhs(0.0, bessel_i1(x));
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    s.upper("connection_j1_i1", worst, 1e-10, "J1(ix) against i I1(x), relative");
  });
  s.guard("series_asymptotic_handover", [&] {
    double worst = 0.0;
    for (double r = 15.0; r <= 25.0; r += 0.5) {
      for (double ang : {0.0, 0.1, -0.1, 0.2}) {
        const Complex z = std::polar(r, ang);
        const Complex js = bessel_j1_series(z), ja = bessel_j1_asymptotic(z);
        const Complex ys = bessel_y1_series(z), ya = bessel_y1_asymptotic(z);
        const double scale = std::max(std::abs(ja) + std::abs(ya), 1e-300);
        worst = std::max(worst, (std::abs(js - ja) + std::abs(ys - ya)) / scale);
      }
    }
    s.upper("series_asymptotic_handover", worst, 1e-8, "|z| in [15, 25]");
  });
  s.guard("bessel_reference_values", [&] {
    const double worst = std::max({std::abs(bessel_j1(1.0).real() - 0.44005058574493355),
                                   std::abs(bessel_y1(1.0).real() + 0.7812128213002888),
                                   std::abs(bessel_i1(1.0) - 0.5651591039924851),
                                   std::abs(bessel_k1(1.0) - 0.6019072301972346)});
    s.upper("bessel_reference_values", worst, 1e-12, "J1, Y1, I1, K1 at 1");
  });
  s.guard("modal_ode_residual", [&] {
    double worst = 0.0;
    const double h = 1e-4;
    for (Complex lambda : {Complex(0.32), Complex(-0.5), Complex(6.0, 1.5), Complex(0.0), Complex(0.0, 1.0)}) {
      const auto sol = make_modal_solution(lambda, 1.0, 1.0, 0.5);
      for (double t = 1.01; t <= 21.0; t += 0.37) {
        const auto v = eval_modal(sol, t);
        const Complex ydd = (eval_modal(sol, t + h).ydot - eval_modal(sol, t - h).ydot) / (2.0 * h);
        const Complex res = ydd + 3.0 / t * v.ydot + lambda * v.y;
        worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(v.y)));
      }
    }
    s.upper("modal_ode_residual", worst, 1e-6, "closed form in y'' + (3/t) y' + lambda y");
  });
}

void spectral_checks(Suite& s) {
  std::mt19937_64 rng(20240611);
  s.guard("conjugate_pair_closure", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix G = random_matrix(rng, 2 + trial % 5);
      const Spectrum S = eigendecompose(G);
      for (const Complex z : S.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex w : S.eigenvalues) best = std::min(best, std::abs(std::conj(z) - w));
        worst = std::max(worst, best);
      }
    }
    s.upper("conjugate_pair_closure", worst, 1e-10, "50 random real matrices");
  });
  s.guard("reconstruction", [&] {
    double worst = 0.0;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + trial % 5;
      Vector eig(n);
      for (double& x : eig) x = u(rng);
      const Spectrum S = eigendecompose(similar_to_diagonal(rng, eig, 1e6));
      if (S.is_diagonalizable && S.kappa_P <= 1e6) worst = std::max(worst, S.reconstruction_residual);
    }
    s.upper("reconstruction", worst, 1e-8, "||P diag W - G|| / ||G||");
  });
  s.guard("classification_consistency", [&] {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      double b = u(rng);
      if (std::abs(b) < 1e-3) b = 1.0;
      const double a = u(rng);
      const Matrix G = Matrix::from_rows({{a, b}, {-b, a}});
      if (classify_matrix(eigendecompose(G), 1.0).nagd_verdict != NagdVerdict::UnstableComplex) ++bad;
    }
    std::uniform_real_distribution<double> pos(0.05, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const Matrix A = random_matrix(rng, n);
      Matrix G = linalg::matmul(A.transpose(), A);
      for (std::size_t i = 0; i < n; ++i) G(i, i) += pos(rng);
      if (classify_matrix(eigendecompose(G), 1.0).nagd_verdict != NagdVerdict::StableConvergent) ++bad;
    }
    s.upper("classification_consistency", static_cast<double>(bad), 0.0, "misclassified samples out of 2000");
  });
  s.guard("first_order_vs_nagd_reversal", [&] {
    std::uniform_real_distribution<double> ua(0.01, 10.0), ub(0.01, 10.0);
    std::size_t bad = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const double a = ua(rng), b = (trial % 2 ? 1 : -1) * ub(rng);
      const auto v = classify_matrix(eigendecompose(Matrix::from_rows({{a, b}, {-b, a}})), 1.0);
      if (v.first_order_verdict != FirstOrderVerdict::ExponentiallyStable ||
          v.nagd_verdict != NagdVerdict::UnstableComplex) {
        ++bad;
      }
    }
    s.upper("first_order_vs_nagd_reversal", static_cast<double>(bad), 0.0, "[[a,b],[-b,a]], a > 0");
  });
  s.guard("rate_continuity", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 99; ++k) worst = std::max(worst, predicted_rate(Complex(0.1 + 0.1 * k, 1e-8), 1e-12));
    s.upper("rate_continuity", worst, 1e-4, "beta(a, 1e-8) for a in [0.1, 10]");
  });
  s.guard("boundedness_bound", [&] {
    std::uniform_real_distribution<double> u(0.0, 2.0), iv(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + trial % 3;
      Vector eig(n);
      for (double& x : eig) x = u(rng);
      if (trial % 4 == 0) eig[0] = 0.0;
      const Matrix G = similar_to_diagonal(rng, eig, 100.0);
      const Spectrum S = eigendecompose(G);
      Vector q0(n), v0(n), b(n, 0.0);
      for (double& x : q0) x = iv(rng);
      for (double& x : v0) x = iv(rng);
      const double bound = boundedness_bound(S, 1.0, linalg::norm2(q0), linalg::norm2(v0));
      const auto tr = simulate_nagd(G, b, q0, v0, s.cfg(50.0));
      double sup = 0.0;
      for (std::size_t k = 0; k < tr.size(); ++k) sup = std::max(sup, tr.q_norm(k));
      worst = std::max(worst, sup / bound);
    }
    s.upper("boundedness_bound", worst, 1.0 + 1e-6, "max sup||q|| / bound over 20 matrices");
  });
}

void dynamics_checks(Suite& s) {
  const Vector zero2{0.0, 0.0};
  s.guard("rk4_order", [&] {
    const Complex lambda(0.5);
    const auto sol = make_modal_solution(lambda, 1.0, 1.0, 0.0);
    const Complex exact = eval_modal(sol, 10.0).y;
    auto err = [&](double dt) {
      IntegratorConfig c = s.cfg(10.0);
      c.dt = dt;
      const auto m = simulate_modal(lambda, 1.0, 0.0, c);
      return std::abs(m.y.back() - exact) / std::abs(exact);
    };
    const double e1 = err(s.dt()), e2 = err(s.dt() / 2.0);
    const double ratio = e1 / e2;
    s.flag("rk4_order", ratio >= 12.0 && ratio <= 20.0 && e1 <= 1e-7, ratio, 16.0,
           "error ratio dt vs dt/2 in [12, 20] and relative error at dt <= 1e-7 (error " + std::to_string(e1) + ")");
  });
  s.guard("modal_agreement", [&] {
    double worst = 0.0;
    for (Complex lambda : {Complex(0.317), Complex(0.883), Complex(1.0), Complex(-0.5), Complex(6.0, 1.5)}) {
      const auto m = simulate_modal(lambda, 1.0, 0.0, s.cfg(50.0));
      const auto sol = make_modal_solution(lambda, 1.0, 1.0, 0.0);
      CVector closed;
      for (double t : m.times) closed.push_back(eval_modal(sol, t).y);
      worst = std::max(worst, sup_rel(m.y, closed));
    }
    s.upper("modal_agreement", worst, 1e-5, "closed form vs RK4 on [1, 50], sup-norm relative");
  });
  s.guard("modal_commutation", [&] {
    double worst = 0.0;
    for (const Matrix& G : {Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}}), Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}}),
                            Matrix::from_rows({{1.0, 2.0}, {0.0, 3.0}})}) {
      const Spectrum S = eigendecompose(G);
      const Vector q0{0.5, 0.3}, v0{-0.1, 0.2};
      const auto tr = simulate_nagd(G, zero2, q0, v0, s.cfg(30.0));
      for (std::size_t i = 0; i < S.n; ++i) {
        const CVector w = S.left_vector(i);
        const auto proj = modal_project(tr, w);
        const auto m = simulate_modal(S.eigenvalues[i], linalg::conj_dot(w, q0), linalg::conj_dot(w, v0), s.cfg(30.0));
        worst = std::max(worst, sup_rel(proj.y, m.y));
      }
    }
    s.upper("modal_commutation", worst, 1e-8, "left-eigenvector projection vs modal RK4");
  });
  s.guard("time_restart", [&] {
    const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
    const auto full = simulate_nagd(G, zero2, Vector{0.5, 0.3}, zero2, s.cfg(20.0));
    const auto k0 = static_cast<std::size_t>(std::lround(1.0 / s.dt()));
    IntegratorConfig c = s.cfg(20.0, full.time(k0));
    const auto q = full.q(k0), v = full.v(k0);
    const auto tail = simulate_nagd(G, zero2, Vector(q.begin(), q.end()), Vector(v.begin(), v.end()), c);
    double worst = 0.0;
    const std::size_t m = std::min(tail.size(), full.size() - k0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(tail.q(k)[i] - full.q(k0 + k)[i]));
    }
    s.upper("time_restart", worst, 1e-10, "restart at 2 t0 reproduces the tail");
  });
  s.guard("damping_channel", [&] {
    double worst = 0.0;
    for (double r : {2.0, 3.0, 4.0}) {
      IntegratorConfig c = s.cfg(50.0);
      c.r = r;
      const auto tr = simulate_nagd(Matrix(2, 2), zero2, zero2, Vector{1.0, 0.0}, c);
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const double exact = std::pow(1.0 / tr.time(k), r);
        worst = std::max(worst, std::abs(tr.v(k)[0] - exact));
      }
    }
    s.upper("damping_channel", worst, 1e-8, "v(t) = (t0/t)^r for G = 0, r in {2,3,4}");
  });
  s.guard("first_order_decay", [&] {
    const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
    const auto tr = simulate_first_order(G, zero2, Vector{1.0, 0.0}, s.cfg(4.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double exact = std::exp(-6.0 * (tr.time(k) - 1.0));
      worst = std::max(worst, std::abs(tr.q_norm(k) - exact) / exact);
    }
    s.upper("first_order_decay", worst, 1e-6, "||x(t)|| = exp(-6 (t - t0)) on [1, 4]");
  });
  s.guard("first_order_skew_norm", [&] {
    const auto tr = simulate_first_order(Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}}), zero2, Vector{1.0, 0.0},
                                         s.cfg(50.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) worst = std::max(worst, std::abs(tr.q_norm(k) - 1.0));
    s.upper("first_order_skew_norm", worst, 1e-6, "norm constant on [1, 50]");
  });
  s.guard("smooth_instability", [&] {
    const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
    const FieldFn F = [&](std::span<const double> x, std::span<double> out) {
      linalg::matvec(G, x, out);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += 0.1 * x[i] * x[i] * x[i];
    };
    const Vector x0{1e-3 / std::sqrt(2.0), 1e-3 / std::sqrt(2.0)};
    const auto tr = simulate_smooth_nagd(F, x0, zero2, s.cfg(60.0));
    double peak = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) peak = std::max(peak, tr.q_norm(k));
    s.flag("smooth_instability", peak > 1e-2, peak / 1e-3, 10.0, "max ||x|| / ||x0|| over the horizon");
    const Matrix J = finite_difference_jacobian(F, zero2, 1e-5);
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(J.values()[i] - G.values()[i]));
    s.upper("fd_jacobian", err, 1e-8, "central differences at the equilibrium, h = 1e-5");
  });
}

void analysis_checks(Suite& s) {
  std::mt19937_64 rng(77);
  const Vector zero2{0.0, 0.0};
  s.guard("lyapunov_symmetric", [&] {
    const Matrix G = Matrix::from_rows({{0.4, 0.2}, {0.2, 0.8}});
    const auto L = lyapunov_series(simulate_nagd(G, zero2, Vector{0.5, 0.3}, zero2, s.cfg(100.0)), G);
    const double inc = max_relative_increase(L.V);
    const double rms = relative_rms(L.Vdot_numeric, L.Vdot_analytic, 2);
    s.flag("lyapunov_symmetric", inc <= 1e-8 && rms <= 1e-4, rms, 1e-4,
           "V nonincreasing (max step increase " + std::to_string(inc) + ") and Vdot relative RMS");
  });
  s.guard("lyapunov_skew", [&] {
    const Matrix G = Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
    const auto L = lyapunov_series(simulate_nagd(G, zero2, Vector{1.0, 0.0}, zero2, s.cfg(20.0)), G);
    double worst = 0.0;
    for (double x : L.asymmetry_residual) worst = std::max(worst, std::abs(x));
    if (L.applicable) {
      s.flag("lyapunov_skew", false, worst, 0.0, "skew G reported as applicable");
    } else {
      s.not_applicable("lyapunov_skew", worst, "G not symmetric; max |(t^2/2) v^T (G^T - G) q| reported");
    }
  });
  s.guard("lyapunov_dissipation_random", [&] {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_inc = -1.0, worst_int = -1.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 5;
      const Matrix A = random_matrix(rng, n, 0.7);
      Matrix G = linalg::matmul(A.transpose(), A);
      if (trial % 3 == 0 && n > 1) {
        // rank-deficient sample
        Matrix B = A;
        for (std::size_t j = 0; j < n; ++j) B(0, j) = 0.0;
        G = linalg::matmul(B.transpose(), B);
      }
      Vector q0(n), v0(n), b(n, 0.0);
      for (double& x : q0) x = u(rng);
      for (double& x : v0) x = u(rng);
      const auto tr = simulate_nagd(G, b, q0, v0, s.cfg(50.0));
      const auto L = lyapunov_series(tr, G);
      worst_inc = std::max(worst_inc, max_relative_increase(L.V));
      double integral = 0.0;
      for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        integral -= 0.5 * (L.Vdot_analytic[k] + L.Vdot_analytic[k + 1]) * (tr.time(k + 1) - tr.time(k));
      }
      worst_int = std::max(worst_int, integral - (L.V.front() + 1e-6));
    }
    s.flag("lyapunov_dissipation_random", worst_inc <= 1e-8 && worst_int <= 0.0, worst_inc, 1e-8,
           "20 random PSD matrices; integral bound excess " + std::to_string(worst_int));
  });
  s.guard("chetaev_negative", [&] {
    const double mu = std::sqrt(0.5);
    const double t0 = 6.0 / mu + 1.0;
    const auto tr = simulate_nagd(Matrix::from_rows({{-0.5}}), Vector{0.0}, Vector{1.0}, Vector{1.0},
                                  s.cfg(t0 + 40.0, t0));
    const auto C = chetaev_negative(tr, Vector{1.0}, mu);
    bool all_in = true;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < C.W.size(); ++k) {
      all_in = all_in && C.in_omega[k];
      min_ratio = std::min(min_ratio, C.growth_ratio[k]);
    }
    s.flag("chetaev_negative", all_in && min_ratio >= mu / 6.0 - 1e-3, min_ratio, mu / 6.0 - 1e-3,
           all_in ? "all samples in Omega; min dlogW/dt" : "left Omega");
  });
  s.guard("chetaev_complex", [&] {
    const Matrix G = Matrix::from_rows({{6.0, 1.5}, {-1.5, 6.0}});
    const Spectrum S = eigendecompose(G);
    const std::size_t i = S.eigenvalues[0].imag() > 0.0 ? 0 : 1;
    const auto C = chetaev_complex(simulate_nagd(G, zero2, Vector{1.0, 0.0}, zero2, s.cfg(60.0)), S.left_vector(i));
    const double beta = predicted_rate(S.eigenvalues[i]);
    const double rate = C.rate_fit ? C.rate_fit->slope : std::nan("");
    s.upper("chetaev_complex", std::abs(rate - beta) / beta, 0.10, "relative error of the rho growth rate");
  });
  s.guard("energy_identity", [&] {
    double worst = 0.0;
    for (Complex lambda : {Complex(0.0, 1.0), Complex(6.0, 1.5)}) {
      worst = std::max(worst, energy_identity_residual(simulate_modal(lambda, 1.0, 0.3, s.cfg(50.0)), lambda));
    }
    s.upper("energy_identity", worst, 1e-5, "d/dt(t^3 Q) = 2i Im(lambda) t^3 |y|^2");
    s.upper("energy_q0_real", std::abs(skew_product(1.0, 0.3)), 0.0, "Q(t0) for real data");
  });
  s.guard("nullspace_velocity_law", [&] {
    const Matrix G = Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}});
    const auto tr = simulate_nagd(G, zero2, Vector{0.5, -0.3}, Vector{0.1, 0.2}, s.cfg(100.0));
    const CVector w{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    const auto y = modal_project(tr, w);
    double worst = 0.0;
    for (std::size_t k = 0; k < y.times.size(); ++k) {
      const Complex exact = std::pow(1.0 / y.times[k], 3) * y.ydot.front();
      worst = std::max(worst, std::abs(y.ydot[k] - exact) / std::abs(y.ydot.front()));
    }
    s.upper("nullspace_velocity_law", worst, 1e-6, "(t0/t)^3 decay of the null-space velocity");
    const double limit = nullspace_limit(1.0, y.y.front().real(), y.ydot.front().real());
    s.upper("nullspace_limit", std::abs(y.y.back().real() - limit), 1e-3, "y1(t0) + (t0/2) y2(t0) vs final value");
  });
  s.guard("rate_fit_calibration", [&] {
    std::vector<double> t, p, e;
    for (int k = 0; k <= 1000; ++k) {
      t.push_back(1.0 + 0.1 * k);
      p.push_back(std::pow(t.back(), -1.5));
      e.push_back(std::exp(0.707 * t.back()));
    }
    const double ea = std::abs(fit_rate(t, p, {30.0, 100.0}, FitKind::AlgebraicLogLog, false).slope + 1.5);
    const double ee = std::abs(fit_rate(t, e, {20.0, 60.0}, FitKind::ExponentialSemilog, false).slope - 0.707);
    s.upper("rate_fit_calibration", std::max(ea, ee), 1e-6, "synthetic power law and exponential");
  });
}

void game_checks(Suite& s) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_game = [&](std::size_t n, bool potential) {
    QuadraticGame g;
    Matrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) sym(i, j) = sym(j, i) = u(rng);
    for (std::size_t p = 0; p < n; ++p) {
      Matrix Q(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) Q(i, j) = Q(j, i) = u(rng);
      if (potential) {
        // row p of Q_p equals half of row p of a shared symmetric matrix
        for (std::size_t j = 0; j < n; ++j) Q(p, j) = Q(j, p) = 0.5 * sym(p, j);
      }
      g.Q.push_back(Q);
      Vector d(n);
      for (double& x : d) x = u(rng);
      g.d.push_back(d);
    }
    return g;
  };
  s.guard("pseudo_gradient_formula", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 6;
      const QuadraticGame g = random_game(n, false);
      const auto sys = pseudo_gradient(g);
      for (int pt = 0; pt < 100; ++pt) {
        Vector x(n);
        for (double& v : x) v = u(rng);
        const Vector F = sys.evaluate(x);
        for (std::size_t i = 0; i < n; ++i) {
          double explicit_sum = g.d[i][i];
          for (std::size_t j = 0; j < n; ++j) explicit_sum += 2.0 * g.Q[i](i, j) * x[j];
          worst = std::max(worst, std::abs(explicit_sum - F[i]));
        }
      }
    }
    s.upper("pseudo_gradient_formula", worst, 1e-12, "explicit partial derivatives vs G x + b");
  });
  s.guard("potential_game_symmetry", [&] {
    std::size_t bad = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const bool potential = trial % 2 == 0;
      const auto sys = pseudo_gradient(random_game(2 + trial % 4, potential));
      const FieldFn F = [&](std::span<const double> x, std::span<double> out) {
        const Vector v = sys.evaluate(x);
        std::copy(v.begin(), v.end(), out.begin());
      };
      const Matrix J = finite_difference_jacobian(F, Vector(sys.G.rows(), 0.0), 1e-5);
      double curl = 0.0;
      for (std::size_t i = 0; i < J.rows(); ++i)
        for (std::size_t j = 0; j < J.cols(); ++j) curl = std::max(curl, std::abs(J(i, j) - J(j, i)));
      const bool curl_free = curl <= 1e-8;
      if (curl_free != potential || curl_free != eigendecompose(sys.G).is_symmetric) ++bad;
    }
    s.upper("potential_game_symmetry", static_cast<double>(bad), 0.0, "curl-free field iff G symmetric");
  });
  s.guard("translation_invariance", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 2 + trial % 3;
      PseudoGradientSystem sys;
      sys.G = random_matrix(rng, n);
      for (std::size_t i = 0; i < n; ++i) sys.G(i, i) += 2.0;
      sys.b.resize(n);
      for (double& x : sys.b) x = u(rng);
      const Vector x_star = solve_equilibrium(sys);
      Vector q0(n), v0(n);
      for (double& x : q0) x = u(rng);
      for (double& x : v0) x = u(rng);
      const auto h = translate_to_homogeneous(sys, q0, v0);
      const auto affine = simulate_nagd(sys.G, sys.b, q0, v0, s.cfg(20.0));
      const auto homog = simulate_nagd(h.G, Vector(n, 0.0), h.q0, h.v0, s.cfg(20.0));
      for (std::size_t k = 0; k < affine.size() && k < homog.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
          worst = std::max(worst, std::abs(affine.q(k)[i] - (homog.q(k)[i] + x_star[i])));
    }
    s.upper("translation_invariance", worst, 1e-10, "affine vs shifted homogeneous trajectories");
  });
}

}  // namespace

std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::vector<CheckResult> run_checks(const CheckOptions& opts) {
  const double dt = opts.dt.value_or(0.01);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "check: dt must be positive");
  Suite s(dt);
  special_checks(s);
  spectral_checks(s);
  dynamics_checks(s);
  analysis_checks(s);
  game_checks(s);
  return s.take();
}

std::string checks_json(const std::vector<CheckResult>& results) {
  using nlohmann::json;
  json arr = json::array();
  std::size_t failed = 0;
  for (const auto& r : results) {
    failed += r.status == CheckStatus::Fail;
    arr.push_back({{"name", r.name},
                   {"status", std::string(to_string(r.status))},
                   {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
                   {"threshold", r.threshold},
                   {"detail", r.detail}});
  }
  json j = {{"checks", arr}, {"failed", failed}, {"total", results.size()}, {"pass", failed == 0}};
  return j.dump(2) + "\n";
}

}  // namespace nagd
