// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// selected criterion fails. `--only NAME` (repeatable) restricts the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dhlab/construction.hpp"
#include "dhlab/dh_measure.hpp"
#include "dhlab/logconcavity.hpp"
#include "dhlab/toric.hpp"
#include "random_forms.hpp"

using namespace dhlab;
namespace fc = dhlab::fiber_chart;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int index;
  std::string name;
  std::function<Outcome()> run;
};

const CutWindow kWindow{0.5, 4.5};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ChartPtr fiber() {
  static ChartPtr c = make_fiber_chart(kWindow.lower, kWindow.upper);
  return c;
}

Form shifted_omega(testing::FormGenerator& gen) {
  Form shift = Form::zero(fiber(), 1);
  for (std::size_t k = fc::x1; k <= fc::x4; ++k) shift += Form::term(fiber(), {k}, gen.rational(9, 7));
  return build_omega(build_connection({canonical_gauge(fiber()).a + shift}), OmegaParams{});
}

Form default_omega() { return build_omega(build_connection(canonical_gauge(fiber())), OmegaParams{}); }

Poly default_density() { return analytic_dh_density(verify_construction(default_omega(), kWindow), kWindow); }

Outcome closedness() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = exterior_derivative(default_omega()).is_zero();
  testing::FormGenerator gen(fiber(), 1001);
  int closed = 0;
  for (int i = 0; i < 100; ++i) closed += exterior_derivative(shifted_omega(gen)).is_zero();
  const double dt = seconds_since(t0);
  ok = ok && closed == 100 && dt < 1.0;
  return {ok, fmt("d(omega) = 0 for default gauge and %d/100 shifts, %.3f s", closed, dt)};
}

Outcome moment_identity() {
  const Form minus_dt = -Form::differential(fiber(), fc::t);
  bool ok = interior_product(default_omega(), {fc::theta}) == minus_dt;
  testing::FormGenerator gen(fiber(), 1002);
  int hits = 0;
  for (int i = 0; i < 100; ++i) hits += interior_product(shifted_omega(gen), {fc::theta}) == minus_dt;
  ok = ok && hits == 100;
  return {ok, fmt("i(d/dtheta) omega = -dt for default gauge and %d/100 shifts", hits)};
}

Outcome top_power() {
  const Form omega = default_omega();
  const Form cube = wedge(wedge(omega, omega), omega);
  const Poly top = cube.coefficient({fc::x1, fc::x2, fc::x3, fc::x4, fc::t, fc::theta});
  const Poly want = Rational(6) * Poly::univariate(6, fc::t, {7, -5, 1});
  return {top == want, "omega^3 coefficient = " + top.to_string(fiber().get())};
}

Outcome chern_faces() {
  const auto report = verify_construction(default_omega(), kWindow);
  // Curvature recovered from omega, integrated through the pairing with the
  // coordinate vectors; all faces have unit area.
  const Form curvature = exterior_derivative(interior_product(default_omega(), {fc::t}));
  auto oracle = [&](std::size_t i, std::size_t j) {
    Rational v(0);
    for (const auto& [idx, p] : curvature.terms()) {
      if (idx[0] == i && idx[1] == j) v += p.constant_term();
      if (idx[0] == j && idx[1] == i) v -= p.constant_term();
    }
    return v;
  };
  bool ok = report.chern_computed && report.chern_numbers.size() == 6;
  std::string detail;
  for (const auto& [face, value] : report.chern_numbers) {
    Rational want(0);
    if (face == std::pair<std::size_t, std::size_t>{fc::x1, fc::x4}) want = -1;
    if (face == std::pair<std::size_t, std::size_t>{fc::x3, fc::x2}) want = -1;
    const Rational check = oracle(face.first, face.second);
    ok = ok && value == want;
    detail += fiber()->variable(face.first).name + fiber()->variable(face.second).name + "=" + to_string(value);
    if (value != want) detail += "(expected " + to_string(want) + ", oracle " + to_string(check) + ")";
    detail += " ";
  }
  return {ok, detail};
}

Outcome dh_density() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = build_construction({}, kWindow);
  SamplerConfig cfg;
  cfg.sample_count = 2'000'000;
  cfg.bins = 40;
  cfg.seed = 42;
  cfg.window = kWindow;
  const auto est = normalize(sample_pushforward(c.report.top_power_poly, cfg));
  const auto cmp = compare(est, analytic_dh_density(c.report, kWindow), kWindow);
  const double dt = seconds_since(t0);
  const std::size_t center = bin_index(uniform_edges(kWindow, cfg.bins), 0.5 * (kWindow.lower + kWindow.upper));
  const double mid = est.density[center];
  // Antiderivative oracle: mass of t^2 - 5t + 7 over the window.
  auto F = [](double s) { return s * s * s / 3.0 - 2.5 * s * s + 7.0 * s; };
  const double oracle = 0.75 / (F(kWindow.upper) - F(kWindow.lower));
  const bool ok = cmp.max_rel_error <= 0.03 && cmp.bins_beyond(3.0) <= 1 && std::abs(mid - 0.09) <= 0.003 &&
                  std::abs(oracle - 0.09) < 1e-12 && dt <= 60.0;
  return {ok, fmt("max rel err %.4f, %zu bins |z|>3, center %.5f (oracle %.5f), %.2f s", cmp.max_rel_error,
                  cmp.bins_beyond(3.0), mid, oracle, dt)};
}

Outcome log_concavity() {
  const double lo = 2.5 - std::sqrt(3.0) / 2.0, hi = 2.5 + std::sqrt(3.0) / 2.0;
  const Poly rho = default_density();
  const auto exact = analytic_logconcavity(rho, {kWindow.lower, kWindow.upper});
  bool ok = !exact.log_concave && exact.violation_intervals.size() == 1 &&
            std::abs(exact.violation_intervals[0].lo - lo) <= 1e-9 &&
            std::abs(exact.violation_intervals[0].hi - hi) <= 1e-9;
  const double h = 0.01;
  std::vector<Sample> samples;
  for (int i = 0; i <= 400; ++i) {
    const double s = kWindow.lower + h * i;
    samples.push_back({s, rho.evaluate_at(fc::t, s)});
  }
  const auto disc = discrete_logconcavity(samples, 1e-9);
  ok = ok && disc.violation_intervals.size() == 1 && std::abs(disc.violation_intervals[0].lo - lo) <= 2 * h &&
       std::abs(disc.violation_intervals[0].hi - hi) <= 2 * h;
  if (exact.violation_intervals.empty() || disc.violation_intervals.empty()) return {false, "no violation found"};
  return {ok, fmt("analytic (%.12f, %.12f), discrete [%.4f, %.4f]", exact.violation_intervals[0].lo,
                  exact.violation_intervals[0].hi, disc.violation_intervals[0].lo, disc.violation_intervals[0].hi)};
}

Outcome monotonicity() {
  const Poly slope = default_density().derivative(fc::t);
  const Rational a = rational_from_double(kWindow.lower), b = rational_from_double(kWindow.upper), m(5, 2);
  // Linear slope: its sign on an open interval is fixed by the endpoints.
  const bool linear = slope.total_degree() <= 1;
  const int at_a = sgn(slope.evaluate_at_exact(fc::t, a)), at_m = sgn(slope.evaluate_at_exact(fc::t, m)),
            at_b = sgn(slope.evaluate_at_exact(fc::t, b));
  const bool ok = linear && at_a < 0 && at_m == 0 && at_b > 0;
  return {ok, "density' = " + slope.to_string(fiber().get()) + ", zero at 5/2"};
}

Outcome cut_invariance() {
  const double lo = 2.5 - std::sqrt(3.0) / 2.0, hi = 2.5 + std::sqrt(3.0) / 2.0;
  const Poly reference = default_density();
  bool ok = true;
  std::string detail;
  for (CutWindow w : {CutWindow{0.5, 4.5}, CutWindow{1.0, 4.0}, CutWindow{2.0, 3.0}}) {
    const auto c = build_construction({}, w);
    const Poly rho = analytic_dh_density(c.report, w);
    const auto r = analytic_logconcavity(rho, {w.lower, w.upper});
    const double want_lo = std::max(lo, w.lower), want_hi = std::min(hi, w.upper);
    const bool same = rho == reference;
    const bool violation = !r.log_concave && r.violation_intervals.size() == 1 &&
                           std::abs(r.violation_intervals[0].lo - want_lo) <= 1e-9 &&
                           std::abs(r.violation_intervals[0].hi - want_hi) <= 1e-9;
    ok = ok && same && violation;
    detail += fmt("(%.1f,%.1f):%s,%s ", w.lower, w.upper, same ? "same" : "DIFFERENT",
                  violation ? "non-log-concave" : "unexpected verdict");
  }
  return {ok, detail};
}

HPolytope random_polytope(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> off(0.2, 1.0);
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    hs.push_back({e, 1.0});
    e[i] = -1.0;
    hs.push_back({e, 1.0});
  }
  for (int k = 0; k < 4; ++k) {
    std::vector<double> a(dim);
    for (auto& v : a) v = n(rng);
    hs.push_back({a, off(rng)});
  }
  return HPolytope(dim, hs);
}

Outcome toric() {
  const auto tri = slice_profile(standard_simplex(2), 0, 40, SliceMethod::Exact2d, 0, 0);
  double exact_err = 0.0;
  for (std::size_t k = 0; k < tri.grid.size(); ++k)
    exact_err = std::max(exact_err, std::abs(tri.volumes[k] - (1.0 - tri.grid[k])));

  const auto tet = slice_profile(standard_simplex(3), 0, 40, SliceMethod::MonteCarlo, 100'000, 7);
  double tet_err = 0.0;
  for (std::size_t k = 1; k + 1 < tet.grid.size(); ++k) {
    const double want = 0.5 * (1.0 - tet.grid[k]) * (1.0 - tet.grid[k]);
    tet_err = std::max(tet_err, std::abs(tet.volumes[k] - want) / want);
  }

  std::mt19937_64 rng(2024);
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t dim = 2 + static_cast<std::size_t>(i % 3);
    const auto p = random_polytope(dim, rng);
    const auto f = slice_profile(p, static_cast<std::size_t>(i) % dim, 20, SliceMethod::MonteCarlo, 20'000,
                                 static_cast<std::uint64_t>(i));
    failures += !prekopa_check(f, 1e-9, 4.0).log_concave;
  }
  const bool ok = exact_err <= 1e-12 && tet_err <= 0.05 && failures == 0;
  return {ok, fmt("simplex err %.2e, 3-simplex max rel err %.4f, %d/50 random failures", exact_err, tet_err,
                  failures)};
}

Outcome properties() {
  testing::FormGenerator gen(fiber(), 777);
  int dd = 0, comm = 0, leibniz = 0, anti = 0, square = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const Form a = gen.form_up_to(3), b = gen.form_up_to(3);
    dd += exterior_derivative(exterior_derivative(a)).is_zero();
    comm += wedge(a, b) == testing::sign_power(a.degree() * b.degree()) * wedge(b, a);
    const Form p = gen.form_up_to(2), q = gen.form_up_to(2);
    leibniz += exterior_derivative(wedge(p, q)) ==
               wedge(exterior_derivative(p), q) + testing::sign_power(p.degree()) * wedge(p, exterior_derivative(q));
    // Contraction lowers degree, so both factors need degree >= 1.
    const Form u = gen.form(1 + gen.axis() % 3), w = gen.form(1 + gen.axis() % 2);
    const CoordVectorField v{gen.axis()};
    anti += interior_product(wedge(u, w), v) ==
            wedge(interior_product(u, v), w) + testing::sign_power(u.degree()) * wedge(u, interior_product(w, v));
    square += interior_product(interior_product(u, v), v).is_zero();
  }

  const auto c = build_construction({}, kWindow);
  SamplerConfig cfg;
  cfg.sample_count = 300'000;
  cfg.threads = 1;
  const auto ref = normalize(sample_pushforward(c.report.top_power_poly, cfg));
  double drift = 0.0;
  for (unsigned threads : {2u, 3u, 8u}) {
    cfg.threads = threads;
    const auto other = normalize(sample_pushforward(c.report.top_power_poly, cfg));
    for (std::size_t k = 0; k < ref.density.size(); ++k)
      drift = std::max(drift, std::abs(other.density[k] - ref.density[k]) / ref.density[k]);
  }
  const bool ok = dd == n && comm == n && leibniz == n && anti == n && square == n && drift <= 1e-10;
  return {ok, fmt("dd %d, graded %d, Leibniz %d, antiderivation %d, ii %d of %d; thread drift %.1e", dd, comm,
                  leibniz, anti, square, n, drift)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<std::string> only;
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "closedness", closedness},         {2, "moment-map", moment_identity},
      {3, "top-power", top_power},           {4, "chern-faces", chern_faces},
      {5, "dh-density", dh_density},         {6, "log-concavity", log_concavity},
      {7, "monotonicity", monotonicity},     {8, "cut-invariance", cut_invariance},
      {9, "toric", toric},                   {10, "properties", properties},
  };

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    ++ran;
    failed += !out.pass;
    std::printf("[%2d] %s  %-15s %s\n", c.index, out.pass ? "PASS" : "FAIL", c.name.c_str(), out.detail.c_str());
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched\n");
    return 2;
  }
  std::printf("%d/%d passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
