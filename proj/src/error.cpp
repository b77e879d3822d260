#include "dhlab/error.hpp"

namespace dhlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Dimension: return "dimension mismatch";
    case ErrorCode::ChartMismatch: return "chart mismatch";
    case ErrorCode::UnsupportedIntegrand: return "unsupported integrand";
    case ErrorCode::GaugeRejected: return "gauge rejected";
    case ErrorCode::DegenerateWindow: return "degenerate window";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::EmptyMeasure: return "empty measure";
    case ErrorCode::EmptyPolytope: return "empty polytope";
    case ErrorCode::Unbounded: return "unbounded polytope";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::Parse: return "parse error";
  }
  return "unknown error";
}

}  // namespace dhlab
