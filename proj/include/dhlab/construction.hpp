#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dhlab/form.hpp"
#include "dhlab/poly.hpp"
#include "dhlab/rational.hpp"

namespace dhlab {

/// Constants (c1, c2) in
///   omega = s12 + s34 + (c1 - t) s14 + (c2 - t) s23 + dt ∧ Θ,   sij = dxi ∧ dxj.
/// The second mixed slot is s23: with s32 = -s23 in its place (and in the
/// curvature, which closedness ties to it) the top power would be
/// 6 (1 - (c1 - t)(c2 - t)) instead of 6 (1 + (c1 - t)(c2 - t)).
struct OmegaParams {
  Rational c1{2};
  Rational c2{3};
};

/// Moment-map window [lower, upper] kept by the cut; 0 < lower < upper.
struct CutWindow {
  double lower = 0.5;
  double upper = 4.5;

  void validate() const;
  double width() const noexcept { return upper - lower; }
};

/// Local potential a of the connection Θ = dθ + a. It must satisfy
/// da = -s14 - s23 on the fiber chart.
struct GaugePotential {
  Form a;
};

/// The canonical potential x4·dx1 + x3·dx2.
GaugePotential canonical_gauge(const ChartPtr& chart);

/// The prescribed curvature -dx1∧dx4 - dx2∧dx3.
Form target_curvature(const ChartPtr& chart);

/// Θ = dθ + a. Throws GaugeRejected naming da - target when the curvature is
/// wrong.
Form build_connection(const GaugePotential& gauge);

Form build_omega(const Form& theta, const OmegaParams& params);

struct ChernEntry {
  std::pair<std::size_t, std::size_t> face;
  Rational value;
};

struct VerificationReport {
  bool closed = false;
  bool moment_identity = false;
  Poly top_power_poly;
  bool nondegenerate_on_window = false;
  std::vector<ChernEntry> chern_numbers;
  bool chern_computed = false;
  /// One line per failed identity; empty when everything holds.
  std::vector<std::string> failures;

  bool all_passed() const noexcept { return failures.empty(); }
};

/// The six coordinate 2-faces of the torus, oriented as (x1,x2), (x1,x3),
/// (x1,x4), (x3,x2), (x2,x4), (x3,x4).
std::vector<std::pair<std::size_t, std::size_t>> torus_faces();

/// Runs the symbolic battery on omega (closedness, the moment-map identity,
/// the top power and its positivity on the window, Chern integrals of the
/// connection recovered as the contraction of omega with d/dt).
VerificationReport verify_construction(const Form& omega, const CutWindow& window);

/// Top-power coefficient divided by its content: the DH density on the window
/// up to a positive constant.
Poly analytic_dh_density(const VerificationReport& report, const CutWindow& window);

/// Exact integral of a univariate density over the window.
Rational integrate_on_window(const Poly& density, std::size_t var, const CutWindow& window);

/// Everything the front ends need from one parameter choice.
struct Construction {
  ChartPtr chart;
  OmegaParams params;
  CutWindow window;
  Form theta;
  Form omega;
  VerificationReport report;
};

Construction build_construction(const OmegaParams& params, const CutWindow& window);

}  // namespace dhlab
