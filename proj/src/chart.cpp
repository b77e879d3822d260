#include "dhlab/chart.hpp"

#include <set>

#include "dhlab/error.hpp"

namespace dhlab {

Chart::Chart(std::vector<ChartVariable> variables) : variables_(std::move(variables)) {
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name).second) fail(ErrorCode::InvalidArgument, "duplicate chart variable '" + v.name + "'");
    if (!(v.lo < v.hi)) fail(ErrorCode::InvalidArgument, "empty sample interval for '" + v.name + "'");
  }
}

const ChartVariable& Chart::variable(std::size_t index) const {
  if (index >= variables_.size())
    fail(ErrorCode::Dimension, "variable index " + std::to_string(index) + " outside chart");
  return variables_[index];
}

std::optional<std::size_t> Chart::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Chart::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  fail(ErrorCode::InvalidArgument, "chart has no variable '" + std::string(name) + "'");
}

ChartPtr make_fiber_chart(double t_lo, double t_hi) {
  return std::make_shared<const Chart>(std::vector<ChartVariable>{
      {"x1", true, 0.0, 1.0},
      {"x2", true, 0.0, 1.0},
      {"x3", true, 0.0, 1.0},
      {"x4", true, 0.0, 1.0},
      {"t", false, t_lo, t_hi},
      {"theta", true, 0.0, 1.0},
  });
}

}  // namespace dhlab
