#include "dhlab/construction.hpp"

#include <cmath>
#include <string>

#include "dhlab/error.hpp"
#include "dhlab/logconcavity.hpp"

namespace dhlab {

namespace fc = fiber_chart;

namespace {

// Exact sign checks on this many grid intervals back up root isolation when
// certifying positivity of the top power.
constexpr int kPositivityGrid = 256;

Poly var_poly(const ChartPtr& chart, std::size_t var) {
  return Poly::variable(chart->dimension(), var);
}

Poly constant(const ChartPtr& chart, const Rational& c) {
  return Poly::constant(chart->dimension(), c);
}

}  // namespace

void CutWindow::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower > 0.0) || !(lower < upper))
    fail(ErrorCode::DegenerateWindow,
         "cut window must satisfy 0 < A < B, got (" + std::to_string(lower) + ", " + std::to_string(upper) + ")");
}

GaugePotential canonical_gauge(const ChartPtr& chart) {
  Form a = Form::term(chart, {fc::x1}, var_poly(chart, fc::x4)) +
           Form::term(chart, {fc::x2}, var_poly(chart, fc::x3));
  return {std::move(a)};
}

Form target_curvature(const ChartPtr& chart) {
  return Form::term(chart, {fc::x1, fc::x4}, Rational(-1)) + Form::term(chart, {fc::x2, fc::x3}, Rational(-1));
}

Form build_connection(const GaugePotential& gauge) {
  const Form& a = gauge.a;
  const ChartPtr& chart = a.chart();
  if (a.degree() != 1) fail(ErrorCode::InvalidArgument, "gauge potential must be a 1-form");
  for (const auto& [indices, p] : a.terms())
    if (indices[0] > fc::x4)
      fail(ErrorCode::InvalidArgument, "gauge potential may only involve dx1..dx4, found d" +
                                           chart->variable(indices[0]).name);
  const Form residual = exterior_derivative(a) - target_curvature(chart);
  if (!residual.is_zero())
    fail(ErrorCode::GaugeRejected, "curvature of the gauge potential is off by " + to_string(residual));
  return Form::differential(chart, fc::theta) + a;
}

Form build_omega(const Form& theta, const OmegaParams& params) {
  const ChartPtr& chart = theta.chart();
  const Poly t = var_poly(chart, fc::t);
  Form omega = Form::term(chart, {fc::x1, fc::x2}, Rational(1));
  omega += Form::term(chart, {fc::x3, fc::x4}, Rational(1));
  omega += Form::term(chart, {fc::x1, fc::x4}, constant(chart, params.c1) - t);
  omega += Form::term(chart, {fc::x2, fc::x3}, constant(chart, params.c2) - t);
  omega += wedge(Form::differential(chart, fc::t), theta);
  return omega;
}

std::vector<std::pair<std::size_t, std::size_t>> torus_faces() {
  return {{fc::x1, fc::x2}, {fc::x1, fc::x3}, {fc::x1, fc::x4},
          {fc::x3, fc::x2}, {fc::x2, fc::x4}, {fc::x3, fc::x4}};
}

VerificationReport verify_construction(const Form& omega, const CutWindow& window) {
  window.validate();
  const ChartPtr& chart = omega.chart();
  const std::size_t n = chart->dimension();
  const std::size_t t = chart->index_of("t");
  const std::size_t theta = chart->index_of("theta");
  if (omega.degree() != 2) fail(ErrorCode::InvalidArgument, "omega must be a 2-form");

  VerificationReport report;

  const Form d_omega = exterior_derivative(omega);
  report.closed = d_omega.is_zero();
  if (!report.closed) report.failures.push_back("closedness: d(omega) = " + to_string(d_omega));

  const Form contraction = interior_product(omega, {theta});
  const Form expected = -Form::differential(chart, t);
  report.moment_identity = contraction == expected;
  if (!report.moment_identity)
    report.failures.push_back("moment map: i(d/dtheta) omega = " + to_string(contraction) + ", expected -dt");

  const Form cube = wedge(wedge(omega, omega), omega);
  Form::Indices top(n);
  for (std::size_t i = 0; i < n; ++i) top[i] = i;
  report.top_power_poly = cube.degree() == n ? cube.coefficient(top) : Poly(n);

  const Poly& top_poly = report.top_power_poly;
  bool positive = !top_poly.is_zero() && top_poly.depends_only_on(t);
  if (positive) {
    const Rational lo = rational_from_double(window.lower);
    const Rational width = rational_from_double(window.upper) - lo;
    for (int k = 0; k <= kPositivityGrid && positive; ++k) {
      const Rational s = lo + width * Rational(k, kPositivityGrid);
      positive = sgn(top_poly.evaluate_at_exact(t, s)) > 0;
    }
    positive = positive && isolate_roots(top_poly, {window.lower, window.upper}, 1e-12).empty();
  }
  report.nondegenerate_on_window = positive;
  if (!positive)
    report.failures.push_back("nondegeneracy: top power " + top_poly.to_string(chart.get()) +
                              " is not strictly positive on [" + std::to_string(window.lower) + ", " +
                              std::to_string(window.upper) + "]");

  // omega = (terms without dt) + dt ∧ Θ, so contracting with d/dt returns Θ.
  try {
    const Form curvature = exterior_derivative(interior_product(omega, {t}));
    for (auto face : torus_faces()) report.chern_numbers.push_back({face, integrate_over_face(curvature, face)});
    report.chern_computed = true;
  } catch (const Error& e) {
    report.chern_numbers.clear();
    report.failures.push_back(std::string("chern integrals: ") + e.what());
  }
  return report;
}

Poly analytic_dh_density(const VerificationReport& report, const CutWindow& window) {
  window.validate();
  if (!report.closed) fail(ErrorCode::DegenerateWindow, "omega is not closed; no DH density");
  if (!report.nondegenerate_on_window)
    fail(ErrorCode::DegenerateWindow, "top power is not positive on the window (" + std::to_string(window.lower) +
                                          ", " + std::to_string(window.upper) + ")");
  Poly density = report.top_power_poly;
  density *= Rational(1 / report.top_power_poly.content());
  return density;
}

Rational integrate_on_window(const Poly& density, std::size_t var, const CutWindow& window) {
  const auto coeffs = density.univariate_coefficients(var);
  const Rational a = rational_from_double(window.lower);
  const Rational b = rational_from_double(window.upper);
  Rational fa(0), fb(0);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    // Horner on the antiderivative sum c_k s^(k+1) / (k+1).
    const Rational c = coeffs[k] / Rational(static_cast<long>(k + 1));
    fa = (fa + c) * a;
    fb = (fb + c) * b;
  }
  return fb - fa;
}

Construction build_construction(const OmegaParams& params, const CutWindow& window) {
  window.validate();
  ChartPtr chart = make_fiber_chart(window.lower, window.upper);
  Form theta = build_connection(canonical_gauge(chart));
  Form omega = build_omega(theta, params);
  VerificationReport report = verify_construction(omega, window);
  return {std::move(chart), params, window, std::move(theta), std::move(omega), std::move(report)};
}

}  // namespace dhlab
