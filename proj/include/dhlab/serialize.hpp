#pragma once

#include "json.hpp"

#include "dhlab/construction.hpp"
#include "dhlab/form.hpp"
#include "dhlab/logconcavity.hpp"
#include "dhlab/poly.hpp"

namespace dhlab {

/// [{"exps": [e...], "num": n, "den": d}, ...]. Numerators and denominators
/// that do not fit in 64 bits are written as decimal strings.
nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j, std::size_t nvars);

/// {"degree": k, "terms": [{"indices": [i...], "poly": [...]}, ...]}
nlohmann::json form_to_json(const Form& f);
Form form_from_json(const nlohmann::json& j, ChartPtr chart);

nlohmann::json report_to_json(const VerificationReport& report, const Chart& chart);

/// {"log_concave": b, "intervals": [[lo, hi]...], "witnesses": [[s, g]...]}
nlohmann::json violation_to_json(const ViolationReport& report);

/// Text table for the verify command.
std::string report_to_text(const VerificationReport& report, const Chart& chart);

}  // namespace dhlab
