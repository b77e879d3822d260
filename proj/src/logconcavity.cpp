#include "dhlab/logconcavity.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dhlab/error.hpp"

namespace dhlab {

namespace {

int sign_at(const Poly& p, std::size_t var, double x) {
  return sgn(p.evaluate_at_exact(var, rational_from_double(x)));
}

void check_interval(Interval iv) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
    fail(ErrorCode::InvalidArgument, "interval must satisfy lo < hi");
}

double bisect(const Poly& p, std::size_t var, double a, int sa, double b, double tol) {
  while (b - a > tol) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) break;
    const int sm = sign_at(p, var, m);
    if (sm == 0) return m;
    if (sm == sa)
      a = m;
    else
      b = m;
  }
  return a + 0.5 * (b - a);
}

}  // namespace

std::size_t univariate_variable(const Poly& p) {
  std::optional<std::size_t> var;
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (var && *var != i) fail(ErrorCode::InvalidArgument, "expected a univariate polynomial");
      var = i;
    }
  return var.value_or(0);
}

std::vector<double> isolate_roots(const Poly& p, Interval interval, double tol) {
  check_interval(interval);
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "root tolerance must be positive");
  std::vector<double> roots;
  if (p.is_zero() || p.is_constant() || p.nvars() == 0) return roots;
  const std::size_t var = univariate_variable(p);

  const double step = (interval.hi - interval.lo) / kRootScanPoints;
  int prev_sign = 0;
  double prev_x = interval.lo;
  for (int k = 0; k <= kRootScanPoints; ++k) {
    const double x = k == kRootScanPoints ? interval.hi : interval.lo + step * k;
    const int s = sign_at(p, var, x);
    if (s == 0) {
      roots.push_back(x);
    } else if (prev_sign != 0 && s != prev_sign) {
      roots.push_back(bisect(p, var, prev_x, prev_sign, x, tol));
    }
    prev_sign = s;
    prev_x = x;
  }
  return roots;
}

Poly concavity_discriminant(const Poly& f) {
  const std::size_t var = univariate_variable(f);
  if (f.nvars() == 0) return f;
  const Poly d1 = f.derivative(var);
  const Poly d2 = d1.derivative(var);
  return f * d2 - d1 * d1;
}

ViolationReport analytic_logconcavity(const Poly& f, Interval interval) {
  check_interval(interval);
  const std::size_t var = univariate_variable(f);
  const double mid = interval.lo + 0.5 * (interval.hi - interval.lo);
  if (f.is_zero() || f.nvars() == 0 || sign_at(f, var, mid) <= 0 ||
      !isolate_roots(f, interval, 1e-12).empty())
    fail(ErrorCode::Domain, "density is not strictly positive on [" + std::to_string(interval.lo) + ", " +
                                std::to_string(interval.hi) + "]");

  ViolationReport report;
  const Poly g = concavity_discriminant(f);
  if (g.is_zero()) return report;

  std::vector<double> breaks{interval.lo};
  for (double r : isolate_roots(g, interval, 1e-12))
    if (r > breaks.back() && r < interval.hi) breaks.push_back(r);
  breaks.push_back(interval.hi);

  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double m = a + 0.5 * (b - a);
    if (sign_at(g, var, m) > 0) {
      report.violation_intervals.push_back({a, b});
      report.witness_points.push_back({m, g.evaluate_at_exact(var, rational_from_double(m)).get_d()});
    }
  }
  report.log_concave = report.violation_intervals.empty();
  return report;
}

ViolationReport discrete_logconcavity(std::span<const Sample> samples, double tol) {
  return discrete_logconcavity(samples, tol, {});
}

ViolationReport discrete_logconcavity(std::span<const Sample> samples, double tol,
                                      std::span<const double> extra_slack) {
  if (!(tol >= 0.0 && tol < 1.0)) fail(ErrorCode::InvalidArgument, "tol must lie in [0, 1)");
  if (!extra_slack.empty() && extra_slack.size() != samples.size())
    fail(ErrorCode::Dimension, "slack vector length differs from sample count");
  for (const auto& p : samples)
    if (!(p.f > 0.0) || !std::isfinite(p.f))
      fail(ErrorCode::Domain, "nonpositive sample f(" + std::to_string(p.s) + ") = " + std::to_string(p.f));

  ViolationReport report;
  const std::size_t n = samples.size();
  if (n < 3) return report;

  const double h = samples[1].s - samples[0].s;
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "sample abscissae must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((samples[i].s - samples[i - 1].s) - h) > 1e-6 * h)
      fail(ErrorCode::InvalidArgument, "samples are not on a uniform grid");

  std::optional<std::size_t> run_start;
  std::size_t best = 0;
  double best_g = 0.0;
  auto close_run = [&](std::size_t last) {
    report.violation_intervals.push_back({samples[*run_start].s, samples[last].s});
    report.witness_points.push_back({samples[best].s, best_g});
    run_start.reset();
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double slack = tol + (extra_slack.empty() ? 0.0 : extra_slack[i]);
    const double outer = samples[i - 1].f * samples[i + 1].f;
    const double center = samples[i].f * samples[i].f;
    const bool flagged = center < outer * (1.0 - slack);
    if (flagged) {
      const double g = (outer - center) / (h * h);
      if (!run_start || g > best_g) {
        best = i;
        best_g = g;
      }
      if (!run_start) run_start = i;
    } else if (run_start) {
      close_run(i - 1);
    }
  }
  if (run_start) close_run(n - 2);
  report.log_concave = report.violation_intervals.empty();
  return report;
}

}  // namespace dhlab
