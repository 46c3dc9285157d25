#include "nagd/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace nagd::linalg {

namespace {

double cj(double x) { return x; }
Complex cj(Complex x) { return std::conj(x); }
double sq_abs(double x) { return x * x; }
double sq_abs(Complex x) { return std::norm(x); }

template <class T>
double column_sq_norm(const DenseMatrix<T>& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += sq_abs(a(i, j));
  return s;
}

template <class T>
Svd<T> jacobi_svd(const DenseMatrix<T>& input) {
  if (input.rows() < input.cols()) {
    throw Error(ErrorCode::InvalidArgument, "svd: expected rows >= cols");
  }
  DenseMatrix<T> a = input;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix<T> v = DenseMatrix<T>::identity(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_sq_norm(a, p);
        const double beta = column_sq_norm(a, q);
        T gamma{};
        for (std::size_t i = 0; i < m; ++i) gamma += cj(a(i, p)) * a(i, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;

        // Rotate the phase (sign, for real T) of column q so that a_p^* a_q = g > 0.
        const T phase = cj(gamma / g);
        for (std::size_t i = 0; i < m; ++i) a(i, q) *= phase;
        for (std::size_t i = 0; i < n; ++i) v(i, q) *= phase;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const T x = a(i, p);
          const T y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const T x = v(i, p);
          const T y = v(i, q);
          v(i, p) = c * x - s * y;
          v(i, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_sq_norm(a, j));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd<T> out;
  out.singular_values.resize(n);
  out.u = DenseMatrix<T>(m, n);
  out.v = DenseMatrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = a(i, j) / sigma[j];
    }
  }
  return out;
}

template <class T>
std::optional<DenseMatrix<T>> lu_inverse(const DenseMatrix<T>& input) {
  if (!input.is_square()) throw Error(ErrorCode::InvalidArgument, "inverse: matrix not square");
  const std::size_t n = input.rows();
  DenseMatrix<T> a = input;
  DenseMatrix<T> inv = DenseMatrix<T>::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const T d = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= d;
      inv(k, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const T f = a(i, k);
      if (f == T{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  for (const auto& x : inv.values()) {
    if (!std::isfinite(std::abs(x))) return std::nullopt;
  }
  return inv;
}

}  // namespace

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (const Complex& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Complex conj_dot(std::span<const Complex> w, std::span<const double> x) {
  Complex s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += std::conj(w[i]) * x[i];
  return s;
}

Complex conj_dot(std::span<const Complex> w, std::span<const Complex> x) {
  Complex s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += std::conj(w[i]) * x[i];
  return s;
}

double frobenius_norm(const Matrix& a) { return norm2(a.values()); }
double frobenius_norm(const CMatrix& a) { return norm2(a.values()); }

bool all_finite(const Matrix& a) {
  for (double x : a.values()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  Vector out(a.rows());
  matvec(a, x, out);
  return out;
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
    out[i] = s;
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double f = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += f * b(k, j);
    }
  return c;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex f = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += f * b(k, j);
    }
  return c;
}

CMatrix to_complex(const Matrix& a) {
  CMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  return c;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = std::conj(a(i, j));
  return h;
}

Svd<double> svd(const Matrix& a) { return jacobi_svd(a); }
Svd<Complex> svd(const CMatrix& a) { return jacobi_svd(a); }

double condition_number(const CMatrix& a) {
  const auto s = svd(a).singular_values;
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

std::optional<CMatrix> inverse(const CMatrix& a) { return lu_inverse(a); }
std::optional<Matrix> inverse(const Matrix& a) { return lu_inverse(a); }

SymmetricEigen symmetric_eigen(const Matrix& input) {
  if (!input.is_square()) throw Error(ErrorCode::InvalidArgument, "symmetric_eigen: not square");
  const std::size_t n = input.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = input(i, j);
  Matrix v = Matrix::identity(n);

  const double scale = frobenius_norm(a);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-300 + std::numeric_limits<double>::epsilon() * 1e-2 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Householder similarity reduction to upper Hessenberg form.
void reduce_to_hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  Vector ort(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;
    double hh = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0.0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = n; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i < n; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = n; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j < n; ++j) h(i, j) -= f * ort[j];
    }
    h(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i < n; ++i) h(i, m - 1) = 0.0;
  }
}

double sign_of(double magnitude, double sign) { return sign >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

}  // namespace

CVector hessenberg_qr_eigenvalues(const Matrix& input, int max_sweeps) {
  if (!input.is_square()) throw Error(ErrorCode::InvalidArgument, "eigenvalues: matrix not square");
  const int n = static_cast<int>(input.rows());
  Matrix a = input;
  reduce_to_hessenberg(a);
  CVector wri(static_cast<std::size_t>(n));
  if (n == 0) return wri;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  int sweeps = 0;
  auto at = [&](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) <= eps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        wri[static_cast<std::size_t>(nn--)] = x + t;
      } else {
        double y = at(nn - 1, nn - 1);
        double w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wri[static_cast<std::size_t>(nn - 1)] = wri[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) wri[static_cast<std::size_t>(nn)] = x - w / z;
          } else {
            wri[static_cast<std::size_t>(nn)] = Complex(x + p, -z);
            wri[static_cast<std::size_t>(nn - 1)] = std::conj(wri[static_cast<std::size_t>(nn)]);
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps) {
            throw Error(ErrorCode::EigensolverNoConvergence,
                        "Hessenberg QR exceeded " + std::to_string(max_sweeps) + " sweeps");
          }
          if (its == 10 || its == 20) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i < nn + 1; ++i) at(i, i) -= x;
            const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = at(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - r - s;
            r = at(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            at(i + 2, i) = 0.0;
            if (i != m) at(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = at(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) at(k, k - 1) = -at(k, k - 1);
            } else {
              at(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j < nn + 1; ++j) {
              p = at(k, j) + q * at(k + 1, j);
              if (k + 1 != nn) {
                p += r * at(k + 2, j);
                at(k + 2, j) -= p * z;
              }
              at(k + 1, j) -= p * y;
              at(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i < mmin + 1; ++i) {
              p = x * at(i, k) + y * at(i, k + 1);
              if (k + 1 != nn) {
                p += z * at(i, k + 2);
                at(i, k + 2) -= p * r;
              }
              at(i, k + 1) -= p * q;
              at(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const auto s = svd(a);
  const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    if (s.singular_values[k] <= rel_tol * smax) cols.push_back(k);
  }
  Matrix basis(a.cols(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < a.cols(); ++i) basis(i, c) = s.v(i, cols[c]);
  return basis;
}

Vector min_norm_solve(const Matrix& a, std::span<const double> rhs, double rel_tol) {
  const auto s = svd(a);
  const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  Vector x(a.cols(), 0.0);
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    const double sigma = s.singular_values[k];
    if (sigma <= rel_tol * smax || sigma == 0.0) continue;
    double coeff = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) coeff += s.u(i, k) * rhs[i];
    coeff /= sigma;
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] += coeff * s.v(i, k);
  }
  return x;
}

}  // namespace nagd::linalg
