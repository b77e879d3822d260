#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dhlab/chart.hpp"
#include "dhlab/poly.hpp"

namespace dhlab {

/// Coordinate vector field d/dx_axis on a chart.
struct CoordVectorField {
  std::size_t axis = 0;
};

/// A homogeneous differential form of fixed degree on a chart. Terms are keyed
/// by strictly ascending index tuples; repeated indices annihilate and
/// permutations are folded into the coefficient sign when terms are added, so
/// the representation is canonical and equality is exact.
class Form {
 public:
  using Indices = std::vector<std::size_t>;
  using TermMap = std::map<Indices, Poly>;

  Form(ChartPtr chart, std::size_t degree);

  static Form zero(ChartPtr chart, std::size_t degree) {
    return Form(std::move(chart), degree);
  }
  static Form scalar(ChartPtr chart, const Poly& function);
  /// dx_var
  static Form differential(ChartPtr chart, std::size_t var);
  /// coefficient · dx_{i0} ∧ dx_{i1} ∧ ... in the given (any) order.
  static Form term(ChartPtr chart, Indices indices, const Poly& coefficient);
  static Form term(ChartPtr chart, Indices indices, const Rational& coefficient);

  const ChartPtr& chart() const noexcept { return chart_; }
  std::size_t degree() const noexcept { return degree_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Coefficient of the given tuple, with the permutation sign applied.
  Poly coefficient(Indices indices) const;

  /// Adds coefficient·dx_I for an arbitrary index order.
  void add_term(Indices indices, const Poly& coefficient);

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(const Poly& function);
  Form& operator*=(const Rational& scalar);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Poly& f, Form a) { return a *= f; }
  friend Form operator*(const Rational& s, Form a) { return a *= s; }
  Form operator-() const;

  /// Same chart, same degree, same terms.
  bool operator==(const Form& other) const;

 private:
  void check_same_space(const Form& other) const;

  ChartPtr chart_;
  std::size_t degree_;
  TermMap terms_;
};

/// Sorts `indices` in place and returns the permutation sign, or 0 when an
/// index repeats.
int sort_with_sign(Form::Indices& indices);

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);
/// Contraction with d/dx_axis. Contracting the j-th slot (from 0) of an
/// ascending tuple contributes (-1)^j. Degree-0 input yields the zero 0-form.
Form interior_product(const Form& a, CoordVectorField v);

/// Integral of a constant 2-form over the coordinate 2-torus spanned by the
/// ordered pair of periodic axes, oriented by that order.
Rational integrate_over_face(const Form& a, std::pair<std::size_t, std::size_t> axes);

/// e.g. "(2 - t)*dx1^dx4 + dt^dtheta"
std::string to_string(const Form& f);

}  // namespace dhlab
