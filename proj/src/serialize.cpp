#include "dhlab/serialize.hpp"

#include <iomanip>
#include <sstream>

#include "dhlab/error.hpp"

namespace dhlab {

using nlohmann::json;

namespace {

json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class integer_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()), 10);
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) fail(ErrorCode::Parse, "bad integer string in JSON");
    return z;
  }
  fail(ErrorCode::Parse, "expected an integer in JSON");
}

std::string face_name(const Chart& chart, std::pair<std::size_t, std::size_t> face) {
  return chart.variable(face.first).name + "," + chart.variable(face.second).name;
}

}  // namespace

json poly_to_json(const Poly& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms())
    out.push_back({{"exps", e}, {"num", integer_to_json(c.get_num())}, {"den", integer_to_json(c.get_den())}});
  return out;
}

Poly poly_from_json(const json& j, std::size_t nvars) {
  if (!j.is_array()) fail(ErrorCode::Parse, "polynomial JSON must be an array of terms");
  Poly p(nvars);
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("exps") || !t.contains("num") || !t.contains("den"))
      fail(ErrorCode::Parse, "polynomial term needs exps, num and den");
    auto exps = t["exps"].get<Poly::Exponents>();
    const mpz_class den = integer_from_json(t["den"]);
    if (den <= 0) fail(ErrorCode::Parse, "denominator must be positive");
    Rational c(integer_from_json(t["num"]), den);
    c.canonicalize();
    p += Poly::monomial(std::move(exps), c);
  }
  return p;
}

json form_to_json(const Form& f) {
  json terms = json::array();
  for (const auto& [indices, p] : f.terms()) terms.push_back({{"indices", indices}, {"poly", poly_to_json(p)}});
  return {{"degree", f.degree()}, {"terms", terms}};
}

Form form_from_json(const json& j, ChartPtr chart) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("terms"))
    fail(ErrorCode::Parse, "form JSON needs degree and terms");
  Form f(chart, j["degree"].get<std::size_t>());
  for (const auto& t : j["terms"]) {
    if (!t.contains("indices") || !t.contains("poly")) fail(ErrorCode::Parse, "form term needs indices and poly");
    f.add_term(t["indices"].get<Form::Indices>(), poly_from_json(t["poly"], chart->dimension()));
  }
  return f;
}

json report_to_json(const VerificationReport& report, const Chart& chart) {
  json chern = json::array();
  for (const auto& entry : report.chern_numbers)
    chern.push_back({{"face", {chart.variable(entry.face.first).name, chart.variable(entry.face.second).name}},
                     {"num", integer_to_json(entry.value.get_num())},
                     {"den", integer_to_json(entry.value.get_den())}});
  return {
      {"closed", report.closed},
      {"moment_identity", report.moment_identity},
      {"nondegenerate_on_window", report.nondegenerate_on_window},
      {"chern_computed", report.chern_computed},
      {"top_power_poly", poly_to_json(report.top_power_poly)},
      {"top_power", report.top_power_poly.to_string(&chart)},
      {"chern_numbers", chern},
      {"failures", report.failures},
      {"passed", report.all_passed()},
  };
}

json violation_to_json(const ViolationReport& report) {
  json intervals = json::array(), witnesses = json::array();
  for (const auto& iv : report.violation_intervals) intervals.push_back({iv.lo, iv.hi});
  for (const auto& w : report.witness_points) witnesses.push_back({w.s, w.g});
  json out = {{"log_concave", report.log_concave}, {"intervals", intervals}, {"witnesses", witnesses}};
  if (report.trimmed_front || report.trimmed_back)
    out["trimmed"] = {report.trimmed_front, report.trimmed_back};
  return out;
}

std::string report_to_text(const VerificationReport& report, const Chart& chart) {
  std::ostringstream os;
  auto row = [&](const std::string& name, bool ok) {
    os << "  " << std::left << std::setw(28) << name << (ok ? "ok" : "FAILED") << '\n';
  };
  os << "identity                      status\n";
  row("d(omega) = 0", report.closed);
  row("i(d/dtheta) omega = -dt", report.moment_identity);
  row("omega^3 > 0 on window", report.nondegenerate_on_window);
  row("chern integrals", report.chern_computed);
  os << "top power coefficient: " << report.top_power_poly.to_string(&chart) << '\n';
  if (!report.chern_numbers.empty()) {
    os << "chern integrals of the curvature:\n";
    for (const auto& e : report.chern_numbers)
      os << "  (" << face_name(chart, e.face) << ")  " << e.value.get_str() << '\n';
  }
  for (const auto& f : report.failures) os << "failure: " << f << '\n';
  return os.str();
}

}  // namespace dhlab
