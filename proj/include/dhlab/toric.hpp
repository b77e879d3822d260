#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dhlab/logconcavity.hpp"

namespace dhlab {

struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;  // normal · x <= offset
};

class HPolytope {
 public:
  HPolytope(std::size_t dim, std::vector<Halfspace> halfspaces);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }
  bool contains(std::span<const double> x, double eps = 0.0) const;
  /// Same polytope moved by `shift` along `axis`.
  HPolytope translated(std::size_t axis, double shift) const;

 private:
  std::size_t dim_;
  std::vector<Halfspace> halfspaces_;
};

/// Unit cube [0,1]^dim and the standard simplex {x >= 0, sum x <= 1}.
HPolytope unit_cube(std::size_t dim);
HPolytope standard_simplex(std::size_t dim);

/// Vertices from all nonsingular dim-subsets of the bounding hyperplanes.
std::vector<std::vector<double>> enumerate_vertices(const HPolytope& p);

/// True when the recession cone {y : A y <= 0} is trivial.
bool is_bounded(const HPolytope& p);

/// Per-axis extremes of a nonempty bounded polytope. Throws EmptyPolytope or
/// Unbounded.
std::vector<Interval> bounding_box(const HPolytope& p);

Interval projection_range(const HPolytope& p, std::size_t axis);

/// Length of the slice {x_axis = s} of a 2-d polytope.
double slice_volume_exact_2d(const HPolytope& p, std::size_t axis, double s);

/// The (dim-1)-dimensional slice {x_axis = s} in the remaining coordinates,
/// or nullopt when a constraint on s alone already fails.
std::optional<HPolytope> slice_at(const HPolytope& p, std::size_t axis, double s);

struct SliceEstimate {
  double volume = 0.0;
  double stderr_ = 0.0;
};

/// Hit-or-miss over the bounding box of the slice; deterministic in seed.
SliceEstimate slice_volume_mc(const HPolytope& p, std::size_t axis, double s,
                              std::uint64_t n, std::uint64_t seed);

enum class SliceMethod { Exact2d, MonteCarlo };

struct SliceVolumeFn {
  std::size_t axis = 0;
  std::vector<double> grid;
  std::vector<double> volumes;
  std::vector<double> stderr_;
};

/// Slice volumes at the bin centers of projection_range. MC bins use seeds
/// derived from (seed, bin).
SliceVolumeFn slice_profile(const HPolytope& p, std::size_t axis, std::size_t bins,
                            SliceMethod method, std::uint64_t mc_n, std::uint64_t seed);

/// Discrete log-concavity of the trimmed profile. Each sample gets extra
/// relative slack of `sigmas` combined standard errors of the midpoint
/// inequality.
ViolationReport prekopa_check(const SliceVolumeFn& f, double tol, double sigmas = 0.0);

/// {"dim": d, "halfspaces": [{"a": [...], "b": v}, ...]}
HPolytope polytope_from_json(std::string_view text);
std::string polytope_to_json(const HPolytope& p);

/// s,volume,stderr; `comment` lines are emitted with a "# " prefix first.
std::string profile_csv(const SliceVolumeFn& f, std::string_view comment = {});

}  // namespace dhlab
