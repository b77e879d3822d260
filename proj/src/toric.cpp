#include "dhlab/toric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dhlab/error.hpp"
#include "json.hpp"

namespace dhlab {

namespace {

constexpr double kFeasibilityEps = 1e-9;
constexpr double kMaxCombinations = 2e6;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double slack_eps(const Halfspace& h) {
  double scale = std::abs(h.offset);
  for (double a : h.normal) scale = std::max(scale, std::abs(a));
  return kFeasibilityEps * (1.0 + scale);
}

bool satisfies(const Halfspace& h, std::span<const double> x, double eps) {
  double lhs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) lhs += h.normal[i] * x[i];
  return lhs <= h.offset + eps;
}

// Solutions of every nonsingular d-subset of the constraint hyperplanes that
// satisfy all constraints.
std::vector<std::vector<double>> vertices_of(std::size_t d, const std::vector<Halfspace>& hs) {
  const std::size_t m = hs.size();
  std::vector<std::vector<double>> out;
  if (m < d) return out;
  if (binomial(m, d) > kMaxCombinations)
    fail(ErrorCode::InvalidArgument, "too many halfspaces for vertex enumeration in dimension " + std::to_string(d));

  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd b(d);
  std::vector<double> x(d);
  while (true) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a(r, c) = hs[pick[r]].normal[c];
      b(r) = hs[pick[r]].offset;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (lu.isInvertible()) {
      const Eigen::VectorXd sol = lu.solve(b);
      for (std::size_t i = 0; i < d; ++i) x[i] = sol(i);
      const bool feasible =
          std::all_of(hs.begin(), hs.end(), [&](const Halfspace& h) { return satisfies(h, x, slack_eps(h)); });
      if (feasible && std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) out.push_back(x);
    }
    // Next combination in lexicographic order.
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == m - d + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

HPolytope::HPolytope(std::size_t dim, std::vector<Halfspace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)) {
  if (dim_ == 0) fail(ErrorCode::InvalidArgument, "polytope dimension must be positive");
  for (const auto& h : halfspaces_) {
    if (h.normal.size() != dim_) fail(ErrorCode::Dimension, "halfspace normal length differs from polytope dimension");
    if (!std::isfinite(h.offset) || !std::all_of(h.normal.begin(), h.normal.end(), [](double v) { return std::isfinite(v); }))
      fail(ErrorCode::InvalidArgument, "halfspace with non-finite entries");
  }
}

bool HPolytope::contains(std::span<const double> x, double eps) const {
  if (x.size() != dim_) fail(ErrorCode::Dimension, "point dimension differs from polytope dimension");
  return std::all_of(halfspaces_.begin(), halfspaces_.end(), [&](const Halfspace& h) { return satisfies(h, x, eps); });
}

HPolytope HPolytope::translated(std::size_t axis, double shift) const {
  if (axis >= dim_) fail(ErrorCode::Dimension, "axis outside polytope dimension");
  auto hs = halfspaces_;
  for (auto& h : hs) h.offset += h.normal[axis] * shift;
  return HPolytope(dim_, std::move(hs));
}

HPolytope unit_cube(std::size_t dim) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    hs.push_back({e, 1.0});
    e[i] = -1.0;
    hs.push_back({e, 0.0});
  }
  return HPolytope(dim, std::move(hs));
}

HPolytope standard_simplex(std::size_t dim) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = -1.0;
    hs.push_back({e, 0.0});
  }
  hs.push_back({std::vector<double>(dim, 1.0), 1.0});
  return HPolytope(dim, std::move(hs));
}

std::vector<std::vector<double>> enumerate_vertices(const HPolytope& p) {
  return vertices_of(p.dim(), p.halfspaces());
}

bool is_bounded(const HPolytope& p) {
  // Vertices of {A y <= 0} ∩ [-1, 1]^d are all zero iff the cone is trivial.
  const std::size_t d = p.dim();
  std::vector<Halfspace> cone;
  for (const auto& h : p.halfspaces()) cone.push_back({h.normal, 0.0});
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    cone.push_back({e, 1.0});
    e[i] = -1.0;
    cone.push_back({e, 1.0});
  }
  for (const auto& v : vertices_of(d, cone))
    for (double c : v)
      if (std::abs(c) > 1e-7) return false;
  return true;
}

std::vector<Interval> bounding_box(const HPolytope& p) {
  for (const auto& h : p.halfspaces())
    if (std::all_of(h.normal.begin(), h.normal.end(), [](double a) { return a == 0.0; }) && h.offset < 0.0)
      fail(ErrorCode::EmptyPolytope, "polytope has an infeasible constant constraint");
  if (!is_bounded(p)) fail(ErrorCode::Unbounded, "polytope is unbounded");
  const auto vertices = enumerate_vertices(p);
  if (vertices.empty()) fail(ErrorCode::EmptyPolytope, "polytope is empty");
  std::vector<Interval> box(p.dim(), Interval{INFINITY, -INFINITY});
  for (const auto& v : vertices)
    for (std::size_t i = 0; i < p.dim(); ++i) {
      box[i].lo = std::min(box[i].lo, v[i]);
      box[i].hi = std::max(box[i].hi, v[i]);
    }
  return box;
}

Interval projection_range(const HPolytope& p, std::size_t axis) {
  if (axis >= p.dim()) fail(ErrorCode::Dimension, "axis outside polytope dimension");
  return bounding_box(p)[axis];
}

double slice_volume_exact_2d(const HPolytope& p, std::size_t axis, double s) {
  if (p.dim() != 2) fail(ErrorCode::InvalidArgument, "exact slice volumes need a 2-d polytope");
  if (axis > 1) fail(ErrorCode::Dimension, "axis outside polytope dimension");
  const std::size_t other = 1 - axis;
  double lo = -INFINITY, hi = INFINITY;
  for (const auto& h : p.halfspaces()) {
    const double a = h.normal[other];
    const double rhs = h.offset - h.normal[axis] * s;
    if (a > 0.0) {
      hi = std::min(hi, rhs / a);
    } else if (a < 0.0) {
      lo = std::max(lo, rhs / a);
    } else if (rhs < 0.0) {
      return 0.0;
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorCode::Unbounded, "slice is unbounded");
  return std::max(0.0, hi - lo);
}

std::optional<HPolytope> slice_at(const HPolytope& p, std::size_t axis, double s) {
  if (axis >= p.dim()) fail(ErrorCode::Dimension, "axis outside polytope dimension");
  if (p.dim() < 2) fail(ErrorCode::InvalidArgument, "slicing needs dimension at least 2");
  std::vector<Halfspace> hs;
  for (const auto& h : p.halfspaces()) {
    Halfspace r;
    for (std::size_t i = 0; i < p.dim(); ++i)
      if (i != axis) r.normal.push_back(h.normal[i]);
    r.offset = h.offset - h.normal[axis] * s;
    if (std::all_of(r.normal.begin(), r.normal.end(), [](double a) { return a == 0.0; })) {
      if (r.offset < 0.0) return std::nullopt;
      continue;
    }
    hs.push_back(std::move(r));
  }
  return HPolytope(p.dim() - 1, std::move(hs));
}

SliceEstimate slice_volume_mc(const HPolytope& p, std::size_t axis, double s, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "sample count must be positive");
  if (p.dim() == 1) {
    std::vector<double> x{s};
    return {p.contains(x) ? 1.0 : 0.0, 0.0};
  }
  const auto slice = slice_at(p, axis, s);
  if (!slice) return {};
  std::vector<Interval> box;
  try {
    box = bounding_box(*slice);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyPolytope) return {};
    throw;
  }
  double box_volume = 1.0;
  for (const auto& iv : box) box_volume *= iv.hi - iv.lo;
  if (!(box_volume > 0.0)) return {};

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<double> x(box.size());
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < box.size(); ++k)
      x[k] = box[k].lo + (box[k].hi - box[k].lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    if (slice->contains(x)) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(n);
  return {box_volume * frac, box_volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n))};
}

SliceVolumeFn slice_profile(const HPolytope& p, std::size_t axis, std::size_t bins, SliceMethod method,
                            std::uint64_t mc_n, std::uint64_t seed) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "need at least one bin");
  if (method == SliceMethod::Exact2d && p.dim() != 2)
    fail(ErrorCode::InvalidArgument, "exact2d method needs a 2-d polytope");
  const Interval range = projection_range(p, axis);
  SliceVolumeFn f;
  f.axis = axis;
  const double width = (range.hi - range.lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double s = range.lo + width * (static_cast<double>(k) + 0.5);
    f.grid.push_back(s);
    if (method == SliceMethod::Exact2d) {
      f.volumes.push_back(slice_volume_exact_2d(p, axis, s));
      f.stderr_.push_back(0.0);
    } else {
      const auto est = slice_volume_mc(p, axis, s, mc_n, derive_seed(seed, k));
      f.volumes.push_back(est.volume);
      f.stderr_.push_back(est.stderr_);
    }
  }
  return f;
}

ViolationReport prekopa_check(const SliceVolumeFn& f, double tol, double sigmas) {
  std::size_t first = 0, last = f.volumes.size();
  while (first < last && !(f.volumes[first] > 0.0)) ++first;
  while (last > first && !(f.volumes[last - 1] > 0.0)) --last;
  if (last - first < 3)
    fail(ErrorCode::InsufficientData, "slice profile has fewer than 3 positive bins");

  std::vector<Sample> samples;
  std::vector<double> rel;
  for (std::size_t k = first; k < last; ++k) {
    samples.push_back({f.grid[k], f.volumes[k]});
    rel.push_back(f.stderr_.empty() ? 0.0 : f.stderr_[k] / f.volumes[k]);
  }
  std::vector<double> slack(samples.size(), 0.0);
  if (sigmas > 0.0)
    for (std::size_t i = 1; i + 1 < samples.size(); ++i)
      slack[i] = sigmas * std::sqrt(4.0 * rel[i] * rel[i] + rel[i - 1] * rel[i - 1] + rel[i + 1] * rel[i + 1]);
  ViolationReport report = discrete_logconcavity(samples, tol, slack);
  report.trimmed_front = first;
  report.trimmed_back = f.volumes.size() - last;
  return report;
}

HPolytope polytope_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("polytope JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long>() <= 0)
    fail(ErrorCode::Parse, "polytope JSON needs a positive integer \"dim\"");
  if (!j.contains("halfspaces") || !j["halfspaces"].is_array())
    fail(ErrorCode::Parse, "polytope JSON needs a \"halfspaces\" array");
  const auto dim = j["dim"].get<std::size_t>();
  std::vector<Halfspace> hs;
  for (const auto& h : j["halfspaces"]) {
    if (!h.is_object() || !h.contains("a") || !h["a"].is_array() || !h.contains("b") || !h["b"].is_number())
      fail(ErrorCode::Parse, "each halfspace needs \"a\" (array) and \"b\" (number)");
    Halfspace out;
    for (const auto& v : h["a"]) {
      if (!v.is_number()) fail(ErrorCode::Parse, "halfspace normal entries must be numbers");
      out.normal.push_back(v.get<double>());
    }
    if (out.normal.size() != dim) fail(ErrorCode::Parse, "halfspace normal length differs from \"dim\"");
    out.offset = h["b"].get<double>();
    hs.push_back(std::move(out));
  }
  return HPolytope(dim, std::move(hs));
}

std::string polytope_to_json(const HPolytope& p) {
  nlohmann::json j;
  j["dim"] = p.dim();
  j["halfspaces"] = nlohmann::json::array();
  for (const auto& h : p.halfspaces()) j["halfspaces"].push_back({{"a", h.normal}, {"b", h.offset}});
  return j.dump();
}

std::string profile_csv(const SliceVolumeFn& f, std::string_view comment) {
  std::ostringstream os;
  std::istringstream lines{std::string(comment)};
  for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  os << "s,volume,stderr\n";
  for (std::size_t k = 0; k < f.grid.size(); ++k)
    os << fmt(f.grid[k]) << ',' << fmt(f.volumes[k]) << ',' << fmt(f.stderr_[k]) << '\n';
  return os.str();
}

}  // namespace dhlab
