#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "dhlab/error.hpp"
#include "dhlab/toric.hpp"

using namespace dhlab;

namespace {

// Triangle {x >= 0, y >= 0, x + y <= 1} written by hand.
HPolytope triangle() { return HPolytope(2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 1}}); }

// Random polytope containing the origin, clipped to [-1, 1]^dim.
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

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("projection ranges") {
  const auto cube = unit_cube(3);
  for (std::size_t a = 0; a < 3; ++a) {
    const auto r = projection_range(cube, a);
    CHECK(r.lo == doctest::Approx(0.0));
    CHECK(r.hi == doctest::Approx(1.0));
  }
  const auto r = projection_range(triangle().translated(1, 2.0), 1);
  CHECK(r.lo == doctest::Approx(2.0));
  CHECK(r.hi == doctest::Approx(3.0));
  CHECK(enumerate_vertices(standard_simplex(3)).size() == 4);
  CHECK(enumerate_vertices(unit_cube(3)).size() == 8);
  CHECK(code_of([] { projection_range(unit_cube(2), 2); }) == ErrorCode::Dimension);
}

TEST_CASE("exact 2-d slices") {
  CHECK(slice_volume_exact_2d(triangle(), 0, 0.25) == doctest::Approx(0.75));
  CHECK(slice_volume_exact_2d(triangle(), 1, 0.5) == doctest::Approx(0.5));
  CHECK(slice_volume_exact_2d(triangle(), 0, 1.5) == 0.0);
  CHECK(slice_volume_exact_2d(triangle(), 0, -0.5) == 0.0);
  CHECK(slice_volume_exact_2d(unit_cube(2), 0, 0.3) == doctest::Approx(1.0));
  CHECK(code_of([] { slice_volume_exact_2d(unit_cube(3), 0, 0.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Monte Carlo slices") {
  const auto cube = slice_volume_mc(unit_cube(3), 0, 0.5, 100'000, 1);
  CHECK(cube.volume == doctest::Approx(1.0).epsilon(0.01));
  // Slice of the 3-simplex at x0 = 0 is the standard triangle.
  const auto tri = slice_volume_mc(standard_simplex(3), 0, 0.0, 200'000, 2);
  CHECK(std::abs(tri.volume - 0.5) <= 3.0 * tri.stderr_);
  CHECK(tri.stderr_ > 0.0);
  const auto out = slice_volume_mc(standard_simplex(3), 0, 1.5, 1000, 3);
  CHECK(out.volume == 0.0);
  CHECK(out.stderr_ == 0.0);
  const auto again = slice_volume_mc(standard_simplex(3), 0, 0.0, 200'000, 2);
  CHECK(again.volume == tri.volume);
}

TEST_CASE("slice profiles") {
  const auto simplex = slice_profile(standard_simplex(2), 0, 40, SliceMethod::Exact2d, 0, 0);
  REQUIRE(simplex.grid.size() == 40);
  for (std::size_t k = 0; k < 40; ++k) CHECK(simplex.volumes[k] == doctest::Approx(1.0 - simplex.grid[k]));

  const auto square = slice_profile(unit_cube(2), 1, 10, SliceMethod::Exact2d, 0, 0);
  for (double v : square.volumes) CHECK(v == doctest::Approx(1.0));

  // Triangle slices of the 3-simplex have area (1 - s)^2 / 2.
  const auto tet = slice_profile(standard_simplex(3), 2, 20, SliceMethod::MonteCarlo, 50'000, 9);
  for (std::size_t k = 0; k < 20; ++k) {
    if (tet.grid[k] > 0.8) continue;
    const double want = 0.5 * (1.0 - tet.grid[k]) * (1.0 - tet.grid[k]);
    CHECK(std::abs(tet.volumes[k] - want) <= 0.05 * want);
  }
  CHECK(code_of([] { slice_profile(unit_cube(3), 0, 10, SliceMethod::Exact2d, 0, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { slice_profile(unit_cube(2), 0, 0, SliceMethod::Exact2d, 0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Prekopa check examples") {
  CHECK(prekopa_check(slice_profile(standard_simplex(2), 0, 40, SliceMethod::Exact2d, 0, 0), 1e-9).log_concave);
  CHECK(prekopa_check(slice_profile(unit_cube(2), 0, 40, SliceMethod::Exact2d, 0, 0), 1e-9).log_concave);
  CHECK(prekopa_check(slice_profile(standard_simplex(3), 0, 30, SliceMethod::MonteCarlo, 20'000, 4), 1e-9, 4.0)
            .log_concave);

  // A profile shaped like t^2 - 5t + 7 cannot come from a convex body.
  SliceVolumeFn fake;
  for (int k = 0; k < 40; ++k) {
    const double s = 0.55 + 0.1 * k;
    fake.grid.push_back(s);
    fake.volumes.push_back(s * s - 5 * s + 7);
    fake.stderr_.push_back(0.0);
  }
  const auto r = prekopa_check(fake, 1e-9);
  CHECK_FALSE(r.log_concave);
  REQUIRE(r.violation_intervals.size() == 1);
  CHECK(r.violation_intervals[0].lo < 2.5);
  CHECK(r.violation_intervals[0].hi > 2.5);

  SliceVolumeFn tiny;
  tiny.grid = {0, 1, 2, 3};
  tiny.volumes = {0, 1, 1, 0};
  tiny.stderr_ = {0, 0, 0, 0};
  CHECK(code_of([&] { prekopa_check(tiny, 1e-9); }) == ErrorCode::InsufficientData);
  tiny.volumes = {0, 1, 1, 1, 0};
  tiny.grid = {0, 1, 2, 3, 4};
  tiny.stderr_ = {0, 0, 0, 0, 0};
  const auto t = prekopa_check(tiny, 1e-9);
  CHECK(t.log_concave);
  CHECK(t.trimmed_front == 1);
  CHECK(t.trimmed_back == 1);
}

TEST_CASE("unbounded and empty polytopes") {
  const HPolytope half_plane(2, {{{1, 0}, 1}});
  CHECK_FALSE(is_bounded(half_plane));
  CHECK(code_of([&] { bounding_box(half_plane); }) == ErrorCode::Unbounded);
  const HPolytope empty(2, {{{1, 0}, 0}, {{-1, 0}, -1}, {{0, 1}, 1}, {{0, -1}, 1}});
  CHECK(code_of([&] { bounding_box(empty); }) == ErrorCode::EmptyPolytope);
  const HPolytope contradiction(2, {{{0, 0}, -1}, {{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}});
  CHECK(code_of([&] { bounding_box(contradiction); }) == ErrorCode::EmptyPolytope);
  CHECK(is_bounded(unit_cube(4)));
}

TEST_CASE("polytope JSON") {
  const auto p = polytope_from_json(R"({"dim": 2, "halfspaces": [{"a": [-1, 0], "b": 0}, {"a": [0, -1], "b": 0},
                                       {"a": [1, 1], "b": 1}]})");
  CHECK(p.dim() == 2);
  CHECK(p.halfspaces().size() == 3);
  const auto back = polytope_from_json(polytope_to_json(p));
  REQUIRE(back.halfspaces().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.halfspaces()[i].normal == p.halfspaces()[i].normal);
    CHECK(back.halfspaces()[i].offset == p.halfspaces()[i].offset);
  }
  for (const char* bad : {"", "{", "[]", R"({"dim": 0, "halfspaces": []})", R"({"dim": 2})",
                          R"({"dim": 2, "halfspaces": [{"a": [1], "b": 0}]})",
                          R"({"dim": 2, "halfspaces": [{"a": [1, "x"], "b": 0}]})",
                          R"({"dim": 2, "halfspaces": [{"a": [1, 0]}]})"})
    CHECK(code_of([&] { polytope_from_json(bad); }) == ErrorCode::Parse);
}

TEST_CASE("profile CSV") {
  const auto f = slice_profile(standard_simplex(2), 0, 4, SliceMethod::Exact2d, 0, 0);
  const std::string csv = profile_csv(f, "simplex\naxis 0");
  CHECK(csv.rfind("# simplex\n# axis 0\ns,volume,stderr\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("property: translation moves the profile and keeps the verdict") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  for (int i = 0; i < 40; ++i) {
    const auto p = random_polytope(2, rng);
    const double d = shift(rng);
    const auto a = slice_profile(p, 0, 30, SliceMethod::Exact2d, 0, 0);
    const auto b = slice_profile(p.translated(0, d), 0, 30, SliceMethod::Exact2d, 0, 0);
    for (std::size_t k = 0; k < 30; ++k) {
      CHECK(b.grid[k] == doctest::Approx(a.grid[k] + d));
      CHECK(b.volumes[k] == doctest::Approx(a.volumes[k]).epsilon(1e-9));
    }
    CHECK(prekopa_check(a, 1e-9).log_concave == prekopa_check(b, 1e-9).log_concave);
  }
}

TEST_CASE("property: exact and Monte Carlo slices agree") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_polytope(2, rng);
    const auto exact = slice_profile(p, 1, 12, SliceMethod::Exact2d, 0, 0);
    const auto mc = slice_profile(p, 1, 12, SliceMethod::MonteCarlo, 20'000, i);
    int beyond = 0;
    for (std::size_t k = 0; k < 12; ++k) {
      if (mc.stderr_[k] == 0.0) {
        CHECK(mc.volumes[k] == doctest::Approx(exact.volumes[k]));
        continue;
      }
      if (std::abs(mc.volumes[k] - exact.volumes[k]) > 3.0 * mc.stderr_[k]) ++beyond;
    }
    CHECK(beyond <= 1);
  }
}

TEST_CASE("property: random convex bodies have log-concave slice profiles") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const auto p2 = random_polytope(2, rng);
    const auto f = slice_profile(p2, i % 2, 40, SliceMethod::Exact2d, 0, 0);
    const auto r = prekopa_check(f, 1e-9);
    CHECK(r.log_concave);
    // Support of a slice profile is an interval: no zero bins inside it.
    const std::size_t first = r.trimmed_front, last = f.volumes.size() - r.trimmed_back;
    for (std::size_t k = first; k < last; ++k) CHECK(f.volumes[k] > 0.0);
  }
  for (int i = 0; i < 5; ++i) {
    const auto p3 = random_polytope(3, rng);
    CHECK(prekopa_check(slice_profile(p3, 2, 20, SliceMethod::MonteCarlo, 20'000, i), 1e-9, 4.0).log_concave);
  }
}
