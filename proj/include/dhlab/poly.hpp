#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dhlab/rational.hpp"

namespace dhlab {

class Chart;

/// Exact multivariate polynomial with rational coefficients in a fixed number
/// of variables. Terms are keyed by exponent vector in lexicographic order;
/// zero coefficients are never stored, so the zero polynomial is the empty
/// map and equality is structural.
class Poly {
 public:
  using Exponents = std::vector<unsigned>;
  using TermMap = std::map<Exponents, Rational>;

  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& value);
  static Poly variable(std::size_t nvars, std::size_t var);
  static Poly monomial(Exponents exponents, const Rational& coefficient);
  /// Univariate polynomial in `var` from ascending coefficients.
  static Poly univariate(std::size_t nvars, std::size_t var,
                         const std::vector<Rational>& ascending);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Exponents& exponents) const;

  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  /// True when no variable other than `var` appears.
  bool depends_only_on(std::size_t var) const;
  /// Ascending coefficients in `var`; requires depends_only_on(var).
  std::vector<Rational> univariate_coefficients(std::size_t var) const;

  Poly derivative(std::size_t var) const;

  /// Floating-point evaluation with exact coefficients rounded once, nested
  /// Horner over the variables in order.
  double evaluate(std::span<const double> point) const;
  Rational evaluate_exact(std::span<const Rational> point) const;
  /// Evaluation of a polynomial in `var` alone.
  double evaluate_at(std::size_t var, double value) const;
  Rational evaluate_at_exact(std::size_t var, const Rational& value) const;
  /// Sum of |c|·|monomial| at the point; an error scale for evaluate().
  double evaluate_magnitude(std::span<const double> point) const;

  /// Positive rational g such that this/g has coprime integer coefficients.
  /// Zero for the zero polynomial.
  Rational content() const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& scalar);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  Poly operator-() const;

  bool operator==(const Poly&) const = default;

  /// Human-readable rendering, e.g. "6*t^2 - 30*t + 42".
  std::string to_string(const Chart* chart = nullptr) const;

 private:
  void check_compatible(const Poly& other) const;
  void add_term(const Exponents& exponents, const Rational& coefficient);

  std::size_t nvars_;
  TermMap terms_;
};

/// Poly::evaluate with the coefficients rounded to double once up front;
/// for hot loops evaluating the same polynomial at many points.
class PolyEvaluator {
 public:
  explicit PolyEvaluator(const Poly& p);

  double operator()(std::span<const double> point) const;
  std::size_t nvars() const noexcept { return nvars_; }

 private:
  double eval_range(std::size_t begin, std::size_t end, std::size_t var,
                    std::span<const double> point) const;

  std::size_t nvars_;
  std::vector<Poly::Exponents> exponents_;  // lexicographic
  std::vector<double> coefficients_;
};

}  // namespace dhlab
