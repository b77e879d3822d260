#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dhlab {

struct ChartVariable {
  std::string name;
  bool periodic = false;
  // Sampling interval [lo, hi); for periodic variables this is one period.
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const ChartVariable&) const = default;
};

/// An ordered list of coordinates. Forms carry a shared pointer to the chart
/// they live on; charts compare by value.
class Chart {
 public:
  explicit Chart(std::vector<ChartVariable> variables);

  std::size_t dimension() const noexcept { return variables_.size(); }
  const ChartVariable& variable(std::size_t index) const;
  const std::vector<ChartVariable>& variables() const noexcept {
    return variables_;
  }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  bool operator==(const Chart&) const = default;

 private:
  std::vector<ChartVariable> variables_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// The chart (x1, x2, x3, x4, t, theta): four periodic torus coordinates,
/// the moment-map value t sampled on [t_lo, t_hi), and the periodic fiber
/// angle theta. All periods are normalized to 1.
ChartPtr make_fiber_chart(double t_lo, double t_hi);

namespace fiber_chart {
inline constexpr std::size_t x1 = 0;
inline constexpr std::size_t x2 = 1;
inline constexpr std::size_t x3 = 2;
inline constexpr std::size_t x4 = 3;
inline constexpr std::size_t t = 4;
inline constexpr std::size_t theta = 5;
}  // namespace fiber_chart

}  // namespace dhlab
