#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <thread>

#include "nagd/analysis.hpp"
#include "nagd/experiment.hpp"

namespace nagd {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(x)) {
    throw Error(ErrorCode::ConfigError, "grid: bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return x;
}

GridAxis parse_axis(std::string_view s, std::string_view what) {
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : s.find(':', c1 + 1);
  if (c2 == std::string_view::npos || s.find(':', c2 + 1) != std::string_view::npos) {
    throw Error(ErrorCode::ConfigError, "grid: expected lo:hi:count for " + std::string(what));
  }
  GridAxis a;
  a.lo = parse_double(s.substr(0, c1), what);
  a.hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1), what);
  const auto cnt = s.substr(c2 + 1);
  unsigned long long n = 0;
  const auto [p, ec] = std::from_chars(cnt.data(), cnt.data() + cnt.size(), n);
  if (ec != std::errc{} || p != cnt.data() + cnt.size() || n == 0) {
    throw Error(ErrorCode::ConfigError, "grid: count must be a positive integer in " + std::string(what));
  }
  a.count = static_cast<std::size_t>(n);
  return a;
}

}  // namespace

double GridAxis::at(std::size_t i) const {
  if (count <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

SweepSpec parse_grid(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw Error(ErrorCode::ConfigError, "grid: expected a0:a1:na,b0:b1:nb");
  SweepSpec spec;
  spec.a = parse_axis(text.substr(0, comma), "the real axis");
  spec.b = parse_axis(text.substr(comma + 1), "the imaginary axis");
  return spec;
}

std::optional<double> measure_modal_rate(Complex lambda, double dt) {
  const EigenClass cls = classify_eigenvalue(lambda, 1e-9);
  const bool growing = cls.tag == EigenTag::NegativeReal || cls.tag == EigenTag::StrictlyComplex;
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_end = growing ? 60.0 : 100.0;
  try {
    const auto m = simulate_modal(lambda, 1.0, 0.0, cfg);
    std::vector<double> mag(m.y.size());
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(m.y[k]);
    if (cls.tag == EigenTag::Zero) {
      return fit_rate(m.times, mag, kAlgebraicWindow, FitKind::AlgebraicLogLog, false).slope;
    }
    if (cls.tag == EigenTag::PositiveReal) {
      return fit_rate(m.times, mag, kAlgebraicWindow, FitKind::AlgebraicLogLog, true).slope;
    }
    FitWindow w = clip_window(kExponentialWindow, m.times);
    if (m.saturated || !(w.t_b > w.t_a)) w = {m.times.back() / 3.0, m.times.back()};
    return fit_rate(m.times, mag, w, FitKind::ExponentialSemilog, false, 1.5).slope;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  const std::size_t na = spec.a.count, nb = spec.b.count;
  if (na == 0 || nb == 0 || na > kMaxGridPoints / nb) {
    throw Error(ErrorCode::GridTooLarge, "sweep: grid exceeds 1e6 points");
  }
  std::vector<SweepRow> rows(na * nb);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      SweepRow& r = rows[k];
      r.a = spec.a.at(k / nb);
      r.b = spec.b.at(k % nb);
      const Complex lambda(r.a, r.b);
      const EigenClass c = classify_eigenvalue(lambda, 1e-9);
      r.tag = c.tag;
      r.predicted = c.rate;
      if (spec.measure) r.measured = measure_modal_rate(lambda);
    }
  };
  const unsigned jobs = std::max(1u, spec.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "a,b,class,predicted,measured\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.a, r.b);
    s += buf;
    s += to_string(r.tag);
    std::snprintf(buf, sizeof buf, ",%.17g,", r.predicted);
    s += buf;
    if (r.measured) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.measured);
      s += buf;
    }
    s += '\n';
  }
  return s;
}

}  // namespace nagd
