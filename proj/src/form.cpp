#include "dhlab/form.hpp"

#include <algorithm>

#include "dhlab/error.hpp"

namespace dhlab {

namespace {

void check_chart(const ChartPtr& chart) {
  if (!chart) fail(ErrorCode::InvalidArgument, "form without a chart");
}

void check_same_chart(const Form& a, const Form& b) {
  if (a.chart() != b.chart() && !(*a.chart() == *b.chart()))
    fail(ErrorCode::ChartMismatch, "forms live on different charts");
}

}  // namespace

int sort_with_sign(Form::Indices& indices) {
  int sign = 1;
  // Insertion sort; tuples have length at most the chart dimension.
  for (std::size_t i = 1; i < indices.size(); ++i)
    for (std::size_t j = i; j > 0 && indices[j - 1] > indices[j]; --j) {
      std::swap(indices[j - 1], indices[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] == indices[i - 1]) return 0;
  return sign;
}

Form::Form(ChartPtr chart, std::size_t degree) : chart_(std::move(chart)), degree_(degree) {
  check_chart(chart_);
  if (degree_ > chart_->dimension())
    fail(ErrorCode::Dimension, "form degree " + std::to_string(degree_) + " exceeds chart dimension");
}

Form Form::scalar(ChartPtr chart, const Poly& function) {
  Form f(std::move(chart), 0);
  f.add_term({}, function);
  return f;
}

Form Form::differential(ChartPtr chart, std::size_t var) {
  Form f(std::move(chart), 1);
  f.add_term({var}, Poly::constant(f.chart_->dimension(), Rational(1)));
  return f;
}

Form Form::term(ChartPtr chart, Indices indices, const Poly& coefficient) {
  Form f(std::move(chart), indices.size());
  f.add_term(std::move(indices), coefficient);
  return f;
}

Form Form::term(ChartPtr chart, Indices indices, const Rational& coefficient) {
  const std::size_t n = chart ? chart->dimension() : 0;
  return term(std::move(chart), std::move(indices), Poly::constant(n, coefficient));
}

Poly Form::coefficient(Indices indices) const {
  const int sign = sort_with_sign(indices);
  Poly zero(chart_->dimension());
  if (sign == 0 || indices.size() != degree_) return zero;
  auto it = terms_.find(indices);
  if (it == terms_.end()) return zero;
  return sign > 0 ? it->second : -it->second;
}

void Form::add_term(Indices indices, const Poly& coefficient) {
  if (indices.size() != degree_)
    fail(ErrorCode::InvalidArgument, "term of degree " + std::to_string(indices.size()) + " added to a " +
                                         std::to_string(degree_) + "-form");
  if (coefficient.nvars() != chart_->dimension())
    fail(ErrorCode::Dimension, "coefficient ring does not match chart dimension");
  for (std::size_t i : indices)
    if (i >= chart_->dimension()) fail(ErrorCode::Dimension, "form index outside chart");
  const int sign = sort_with_sign(indices);
  if (sign == 0 || coefficient.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(indices, sign > 0 ? coefficient : -coefficient);
  if (!inserted) {
    if (sign > 0)
      it->second += coefficient;
    else
      it->second -= coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Form::check_same_space(const Form& other) const {
  check_same_chart(*this, other);
  if (degree_ != other.degree_)
    fail(ErrorCode::InvalidArgument, "cannot add forms of degree " + std::to_string(degree_) + " and " +
                                         std::to_string(other.degree_));
}

Form& Form::operator+=(const Form& other) {
  check_same_space(other);
  for (const auto& [idx, p] : other.terms_) add_term(idx, p);
  return *this;
}

Form& Form::operator-=(const Form& other) {
  check_same_space(other);
  for (const auto& [idx, p] : other.terms_) add_term(idx, -p);
  return *this;
}

Form& Form::operator*=(const Poly& function) {
  TermMap out;
  for (auto& [idx, p] : terms_) {
    Poly q = p * function;
    if (!q.is_zero()) out.emplace(idx, std::move(q));
  }
  terms_ = std::move(out);
  return *this;
}

Form& Form::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, p] : terms_) p *= scalar;
  return *this;
}

Form Form::operator-() const {
  Form out = *this;
  for (auto& [idx, p] : out.terms_) p = -p;
  return out;
}

bool Form::operator==(const Form& other) const {
  if (chart_ != other.chart_ && !(*chart_ == *other.chart_)) return false;
  return degree_ == other.degree_ && terms_ == other.terms_;
}

Form wedge(const Form& a, const Form& b) {
  check_same_chart(a, b);
  const std::size_t degree = a.degree() + b.degree();
  if (degree > a.chart()->dimension()) return Form(a.chart(), a.chart()->dimension());
  Form out(a.chart(), degree);
  Form::Indices merged;
  merged.reserve(degree);
  for (const auto& [ia, pa] : a.terms())
    for (const auto& [ib, pb] : b.terms()) {
      merged.assign(ia.begin(), ia.end());
      merged.insert(merged.end(), ib.begin(), ib.end());
      out.add_term(merged, pa * pb);
    }
  return out;
}

Form exterior_derivative(const Form& a) {
  const std::size_t n = a.chart()->dimension();
  if (a.degree() == n) return Form(a.chart(), n);
  Form out(a.chart(), a.degree() + 1);
  Form::Indices idx;
  for (const auto& [indices, p] : a.terms())
    for (std::size_t var = 0; var < n; ++var) {
      if (std::binary_search(indices.begin(), indices.end(), var)) continue;
      Poly dp = p.derivative(var);
      if (dp.is_zero()) continue;
      idx.assign(1, var);
      idx.insert(idx.end(), indices.begin(), indices.end());
      out.add_term(idx, dp);
    }
  return out;
}

Form interior_product(const Form& a, CoordVectorField v) {
  if (v.axis >= a.chart()->dimension()) fail(ErrorCode::Dimension, "vector field axis outside chart");
  if (a.degree() == 0) return Form(a.chart(), 0);
  Form out(a.chart(), a.degree() - 1);
  for (const auto& [indices, p] : a.terms()) {
    auto it = std::find(indices.begin(), indices.end(), v.axis);
    if (it == indices.end()) continue;
    const auto slot = static_cast<std::size_t>(it - indices.begin());
    Form::Indices rest(indices.begin(), it);
    rest.insert(rest.end(), it + 1, indices.end());
    out.add_term(std::move(rest), slot % 2 == 0 ? p : -p);
  }
  return out;
}

std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  const Chart& chart = *f.chart();
  std::string out;
  for (const auto& [indices, p] : f.terms()) {
    if (!out.empty()) out += " + ";
    std::string basis;
    for (std::size_t i : indices) basis += (basis.empty() ? "d" : "^d") + chart.variable(i).name;
    if (basis.empty()) {
      out += "(" + p.to_string(&chart) + ")";
    } else if (p == Poly::constant(chart.dimension(), Rational(1))) {
      out += basis;
    } else {
      out += "(" + p.to_string(&chart) + ")*" + basis;
    }
  }
  return out;
}

Rational integrate_over_face(const Form& a, std::pair<std::size_t, std::size_t> axes) {
  const Chart& chart = *a.chart();
  if (a.degree() != 2) fail(ErrorCode::UnsupportedIntegrand, "face integration needs a 2-form");
  const auto [i, j] = axes;
  if (i == j) fail(ErrorCode::InvalidArgument, "face axes must differ");
  const auto& vi = chart.variable(i);
  const auto& vj = chart.variable(j);
  if (!vi.periodic || !vj.periodic)
    fail(ErrorCode::InvalidArgument, "face axes must be periodic variables ('" + vi.name + "', '" + vj.name + "')");
  Poly c = a.coefficient({i, j});
  if (!c.is_constant())
    fail(ErrorCode::UnsupportedIntegrand,
         "non-constant coefficient on face (" + vi.name + "," + vj.name + "): " + c.to_string(&chart));
  const Rational area = rational_from_double(vi.hi - vi.lo) * rational_from_double(vj.hi - vj.lo);
  return c.constant_term() * area;
}

}  // namespace dhlab
