#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dhlab/poly.hpp"

namespace dhlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Sample {
  double s = 0.0;
  double f = 0.0;
};

struct Witness {
  double s = 0.0;
  double g = 0.0;
};

struct ViolationReport {
  bool log_concave = true;
  std::vector<Interval> violation_intervals;
  std::vector<Witness> witness_points;
  /// Bins dropped before testing (slice profiles with zero end volumes).
  std::size_t trimmed_front = 0;
  std::size_t trimmed_back = 0;
};

/// Midpoint test f(s_i)^2 >= f(s_{i-1}) f(s_{i+1}) (1 - tol) on a uniform
/// grid. Flagged runs of adjacent indices become [s_first, s_last]; each run
/// carries one witness at its largest discrete discriminant
/// (f_{i-1} f_{i+1} - f_i^2) / h^2.
ViolationReport discrete_logconcavity(std::span<const Sample> samples, double tol);

/// Same test with a per-sample relative slack added to tol.
ViolationReport discrete_logconcavity(std::span<const Sample> samples, double tol,
                                      std::span<const double> extra_slack);

/// g = f f'' - f'^2 for a univariate polynomial f.
Poly concavity_discriminant(const Poly& f);

/// Exact analysis of a positive univariate polynomial density on an interval.
ViolationReport analytic_logconcavity(const Poly& f, Interval interval);

inline constexpr int kRootScanPoints = 10000;

/// Real roots of a univariate polynomial in (lo, hi): exact sign scan on a
/// uniform grid of kRootScanPoints intervals, then bisection on every sign
/// change down to width tol. Two roots closer than the grid pitch can be
/// missed; a double root without sign change is only found if it lands on a
/// grid point.
std::vector<double> isolate_roots(const Poly& p, Interval interval, double tol);

/// The single variable a polynomial depends on (0 for constants). Throws
/// InvalidArgument for multivariate input.
std::size_t univariate_variable(const Poly& p);

}  // namespace dhlab
