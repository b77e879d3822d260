#include "dhlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dhlab/chart.hpp"
#include "dhlab/error.hpp"

namespace dhlab {

namespace {

double ipow(double x, unsigned e) {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

Rational ipow(const Rational& x, unsigned e) {
  Rational r(1);
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

void check_point(std::size_t nvars, std::size_t size) {
  if (size != nvars)
    fail(ErrorCode::Dimension, "point has " + std::to_string(size) + " coordinates, polynomial has " +
                                   std::to_string(nvars) + " variables");
}

}  // namespace

Poly Poly::constant(std::size_t nvars, const Rational& value) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), value);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t var) {
  if (var >= nvars) fail(ErrorCode::Dimension, "variable index outside polynomial ring");
  Exponents e(nvars, 0);
  e[var] = 1;
  return monomial(std::move(e), Rational(1));
}

Poly Poly::monomial(Exponents exponents, const Rational& coefficient) {
  Poly p(exponents.size());
  p.add_term(exponents, coefficient);
  return p;
}

Poly Poly::univariate(std::size_t nvars, std::size_t var, const std::vector<Rational>& ascending) {
  if (var >= nvars) fail(ErrorCode::Dimension, "variable index outside polynomial ring");
  Poly p(nvars);
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    Exponents e(nvars, 0);
    e[var] = static_cast<unsigned>(k);
    p.add_term(e, ascending[k]);
  }
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                                            [](unsigned e) { return e == 0; }));
}

Rational Poly::constant_term() const { return coefficient(Exponents(nvars_, 0)); }

Rational Poly::coefficient(const Exponents& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Poly::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (unsigned x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

unsigned Poly::degree_in(std::size_t var) const {
  if (var >= nvars_) fail(ErrorCode::Dimension, "variable index outside polynomial ring");
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool Poly::depends_only_on(std::size_t var) const {
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != var && e[i] != 0) return false;
  return true;
}

std::vector<Rational> Poly::univariate_coefficients(std::size_t var) const {
  if (!depends_only_on(var)) fail(ErrorCode::InvalidArgument, "polynomial is not univariate in the requested variable");
  std::vector<Rational> out(is_zero() ? 0 : degree_in(var) + 1, Rational(0));
  for (const auto& [e, c] : terms_) out[e[var]] = c;
  return out;
}

Poly Poly::derivative(std::size_t var) const {
  if (var >= nvars_) fail(ErrorCode::Dimension, "variable index outside polynomial ring");
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    out.add_term(d, c * e[var]);
  }
  return out;
}

double Poly::evaluate(std::span<const double> point) const { return PolyEvaluator(*this)(point); }

Rational Poly::evaluate_exact(std::span<const Rational> point) const {
  check_point(nvars_, point.size());
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) m *= ipow(point[i], e[i]);
    sum += m;
  }
  return sum;
}

double Poly::evaluate_at(std::size_t var, double value) const {
  auto coeffs = univariate_coefficients(var);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * value + it->get_d();
  return acc;
}

Rational Poly::evaluate_at_exact(std::size_t var, const Rational& value) const {
  auto coeffs = univariate_coefficients(var);
  Rational acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * value + *it;
  return acc;
}

double Poly::evaluate_magnitude(std::span<const double> point) const {
  check_point(nvars_, point.size());
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = std::abs(c.get_d());
    for (std::size_t i = 0; i < e.size(); ++i) m *= ipow(std::abs(point[i]), e[i]);
    sum += m;
  }
  return sum;
}

Rational Poly::content() const {
  if (terms_.empty()) return Rational(0);
  mpz_class g = 0, l = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

void Poly::check_compatible(const Poly& other) const {
  if (nvars_ != other.nvars_)
    fail(ErrorCode::Dimension, "polynomials over " + std::to_string(nvars_) + " and " +
                                   std::to_string(other.nvars_) + " variables");
}

void Poly::add_term(const Exponents& exponents, const Rational& coefficient) {
  if (exponents.size() != nvars_) fail(ErrorCode::Dimension, "exponent vector length differs from variable count");
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_compatible(b);
  Poly out(a.nvars_);
  Poly::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

std::string Poly::to_string(const Chart* chart) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t i) {
    return chart && i < chart->dimension() ? chart->variable(i).name : "v" + std::to_string(i);
  };
  // Highest total degree first reads more naturally.
  std::vector<std::pair<const Exponents*, const Rational*>> order;
  for (const auto& [e, c] : terms_) order.emplace_back(&e, &c);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    unsigned dx = 0, dy = 0;
    for (unsigned v : *x.first) dx += v;
    for (unsigned v : *y.first) dy += v;
    if (dx != dy) return dx > dy;
    return *x.first > *y.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : order) {
    Rational mag = abs(*c);
    bool negative = *c < 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::ostringstream mono;
    bool any = false;
    for (std::size_t i = 0; i < e->size(); ++i) {
      if ((*e)[i] == 0) continue;
      if (any) mono << "*";
      mono << name(i);
      if ((*e)[i] > 1) mono << "^" << (*e)[i];
      any = true;
    }
    if (!any) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << mono.str();
    } else {
      os << mag.get_str() << "*" << mono.str();
    }
  }
  return os.str();
}

PolyEvaluator::PolyEvaluator(const Poly& p) : nvars_(p.nvars()) {
  exponents_.reserve(p.terms().size());
  coefficients_.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    exponents_.push_back(e);
    coefficients_.push_back(c.get_d());
  }
}

double PolyEvaluator::operator()(std::span<const double> point) const {
  check_point(nvars_, point.size());
  if (coefficients_.empty()) return 0.0;
  return eval_range(0, coefficients_.size(), 0, point);
}

// Terms in [begin, end) share exponents in variables < var. Groups by the
// exponent of `var` (ascending in lexicographic order) are folded Horner-style
// from the highest power down.
double PolyEvaluator::eval_range(std::size_t begin, std::size_t end, std::size_t var,
                                 std::span<const double> point) const {
  if (var == nvars_) return coefficients_[begin];
  const double x = point[var];
  double acc = 0.0;
  unsigned prev = 0;
  bool started = false;
  std::size_t hi = end;
  while (hi > begin) {
    const unsigned e = exponents_[hi - 1][var];
    std::size_t lo = hi - 1;
    while (lo > begin && exponents_[lo - 1][var] == e) --lo;
    const double inner = eval_range(lo, hi, var + 1, point);
    acc = started ? acc * ipow(x, prev - e) + inner : inner;
    started = true;
    prev = e;
    hi = lo;
  }
  return acc * ipow(x, prev);
}

}  // namespace dhlab
