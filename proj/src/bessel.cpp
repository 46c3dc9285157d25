#include <cmath>
#include <complex>
#include <numbers>

#include "nagd/special.hpp"

namespace nagd {

namespace {

using LComplex = std::complex<long double>;

constexpr long double kEulerGammaL = 0.57721566490153286060651209008240243L;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kSeriesRadius = 20.0;

// Neumaier-compensated accumulator over extended-precision complex values.
class CompensatedSum {
 public:
  void add(LComplex x) {
    add_part(re_, re_c_, x.real());
    add_part(im_, im_c_, x.imag());
  }
  LComplex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(long double& sum, long double& comp, long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  long double re_ = 0, im_ = 0, re_c_ = 0, im_c_ = 0;
};

bool series_done(int k, long double peak_k, LComplex term, LComplex sum) {
  if (k < 2 || static_cast<long double>(k) < peak_k) return false;
  return std::abs(term) <= 1e-21L * std::abs(sum) || term == LComplex{};
}

// The four ascending series share their term recurrences:
//   J0 terms u_k = (-z^2/4)^k / (k!)^2
//   J1 terms v_k = (-z^2/4)^k / (k!(k+1)!)
struct SeriesParts {
  LComplex j0, j1;         // J0(z), J1(z)
  LComplex y0_tail;        // sum_{k>=1} H_k u_k
  LComplex y1_tail;        // sum_k (H_k + H_{k+1} - 2 gamma) v_k
};

SeriesParts ascending_series(LComplex z, long double sign) {
  // sign = -1 for ordinary Bessel functions, +1 for modified ones.
  const LComplex q = sign * z * z / 4.0L;
  const long double peak = std::sqrt(std::abs(q));
  CompensatedSum s0, s1, t0, t1;
  LComplex u = 1.0L;
  LComplex v = 1.0L;
  long double harmonic = 0.0L;  // H_k
  s0.add(u);
  s1.add(v);
  t1.add((harmonic + 1.0L - 2.0L * kEulerGammaL) * v);
  for (int k = 1; k < 600; ++k) {
    const long double kk = static_cast<long double>(k);
    u *= q / (kk * kk);
    v *= q / (kk * (kk + 1.0L));
    harmonic += 1.0L / kk;
    s0.add(u);
    s1.add(v);
    t0.add(harmonic * u);
    t1.add((2.0L * harmonic + 1.0L / (kk + 1.0L) - 2.0L * kEulerGammaL) * v);
    if (series_done(k, peak, u, s0.value()) && series_done(k, peak, v, s1.value())) break;
  }
  return {s0.value(), z / 2.0L * s1.value(), t0.value(), t1.value()};
}

void check_principal(Complex z, bool allow_zero, const char* name) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::DomainError, std::string(name) + ": non-finite argument");
  }
  if (z.imag() == 0.0 && z.real() < 0.0) {
    throw Error(ErrorCode::DomainError, std::string(name) + ": argument on the negative real axis");
  }
  if (!allow_zero && z == Complex{}) {
    throw Error(ErrorCode::DomainError, std::string(name) + ": singular at z = 0");
  }
}

Complex to_double(LComplex z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

struct HankelPQ {
  Complex p, q;
};

// P(nu, z), Q(nu, z) of the Hankel expansion; stops at the smallest term.
HankelPQ hankel_pq(int nu, Complex z) {
  const double mu = 4.0 * nu * nu;
  Complex p = 1.0;
  Complex q = 0.0;
  Complex term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k) / z;
    const double mag = std::abs(term);
    if (k >= 10 && (mag > last || mag < 1e-18)) break;
    last = mag;
    // k odd -> Q with sign (-1)^((k-1)/2); k even -> P with sign (-1)^(k/2)
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
  }
  return {p, q};
}

struct JY {
  Complex j, y;
};

JY hankel_jy(int nu, Complex z) {
  const auto [p, q] = hankel_pq(nu, z);
  const Complex omega = z - (nu * std::numbers::pi / 2.0 + std::numbers::pi / 4.0);
  const Complex pref = std::sqrt(2.0 / (std::numbers::pi * z));
  const Complex c = std::cos(omega);
  const Complex s = std::sin(omega);
  return {pref * (p * c - q * s), pref * (p * s + q * c)};
}

// Modified-function asymptotics: sum_k (+-1)^k a_k(nu) / x^k, smallest-term stop.
double modified_asymptotic_sum(int nu, double x, double sign) {
  const double mu = 4.0 * nu * nu;
  double sum = 1.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (k >= 10 && (mag > last || mag < 1e-18)) break;
    last = mag;
    sum += term;
  }
  return sum;
}

void check_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DomainError, std::string(name) + ": argument must be positive and finite");
  }
}

double modified_i(int nu, double x) {
  if (x > kExponentCap) {
    throw Error(ErrorCode::OverflowSaturation, "modified Bessel I: argument beyond exponent cap");
  }
  if (x <= kSeriesRadius) {
    const auto s = ascending_series(LComplex(x, 0.0L), 1.0L);
    return static_cast<double>((nu == 0 ? s.j0 : s.j1).real());
  }
  return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * modified_asymptotic_sum(nu, x, -1.0);
}

struct K01 {
  double k0, k1;
};

// x <= 2: ascending series with logarithmic terms. x > 2: Steed's continued
// fraction for K0 with K1 from the accompanying ratio (Temme's method).
K01 modified_k(double x) {
  if (x <= 2.0) {
    const auto s = ascending_series(LComplex(x, 0.0L), 1.0L);
    const long double lx = std::log(static_cast<long double>(x) / 2.0L);
    const long double i0 = s.j0.real();
    const long double i1 = s.j1.real();
    const long double k0 = -(lx + kEulerGammaL) * i0 + s.y0_tail.real();
    const long double k1 = 1.0L / x + lx * i1 - static_cast<long double>(x) / 4.0L * s.y1_tail.real();
    return {static_cast<double>(k0), static_cast<double>(k1)};
  }
  constexpr double eps = 1e-17;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace

Complex bessel_j1_series(Complex z) {
  return to_double(ascending_series(LComplex(z.real(), z.imag()), -1.0L).j1);
}

Complex bessel_y1_series(Complex z) {
  const LComplex lz(z.real(), z.imag());
  const auto s = ascending_series(lz, -1.0L);
  const LComplex log_half = std::log(lz / 2.0L);
  const LComplex y = -2.0L / (kPiL * lz) + 2.0L / kPiL * log_half * s.j1 - lz / (2.0L * kPiL) * s.y1_tail;
  return to_double(y);
}

Complex bessel_j1_asymptotic(Complex z) { return hankel_jy(1, z).j; }
Complex bessel_y1_asymptotic(Complex z) { return hankel_jy(1, z).y; }

Complex bessel_j0(Complex z) {
  check_principal(z, true, "bessel_j0");
  if (std::abs(z) <= kSeriesRadius) {
    return to_double(ascending_series(LComplex(z.real(), z.imag()), -1.0L).j0);
  }
  return hankel_jy(0, z).j;
}

Complex bessel_j1(Complex z) {
  check_principal(z, true, "bessel_j1");
  if (std::abs(z) <= kSeriesRadius) return bessel_j1_series(z);
  return bessel_j1_asymptotic(z);
}

Complex bessel_y0(Complex z) {
  check_principal(z, false, "bessel_y0");
  if (std::abs(z) <= kSeriesRadius) {
    const LComplex lz(z.real(), z.imag());
    const auto s = ascending_series(lz, -1.0L);
    const LComplex y = 2.0L / kPiL * ((std::log(lz / 2.0L) + kEulerGammaL) * s.j0 - s.y0_tail);
    return to_double(y);
  }
  return hankel_jy(0, z).y;
}

Complex bessel_y1(Complex z) {
  check_principal(z, false, "bessel_y1");
  if (std::abs(z) <= kSeriesRadius) return bessel_y1_series(z);
  return bessel_y1_asymptotic(z);
}

double bessel_i0(double x) {
  check_positive(x, "bessel_i0");
  return modified_i(0, x);
}

double bessel_i1(double x) {
  check_positive(x, "bessel_i1");
  return modified_i(1, x);
}

double bessel_k0(double x) {
  check_positive(x, "bessel_k0");
  return modified_k(x).k0;
}

double bessel_k1(double x) {
  check_positive(x, "bessel_k1");
  return modified_k(x).k1;
}

}  // namespace nagd
