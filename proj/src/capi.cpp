#include "dhlab/dhlab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "dhlab/construction.hpp"
#include "dhlab/dh_measure.hpp"
#include "dhlab/error.hpp"
#include "dhlab/logconcavity.hpp"
#include "dhlab/serialize.hpp"
#include "dhlab/toric.hpp"

struct dhlab_construction {
  dhlab::Construction value;
};

struct dhlab_density {
  dhlab::DensityEstimate estimate;
  dhlab::ComparisonReport comparison;
  dhlab::CsvProvenance provenance;
  std::size_t center_bin = 0;
};

struct dhlab_violation {
  dhlab::ViolationReport value;
};

struct dhlab_polytope {
  dhlab::HPolytope value;
};

struct dhlab_profile {
  dhlab::SliceVolumeFn value;
};

namespace {

thread_local std::string last_error;

dhlab_status to_status(dhlab::ErrorCode code) {
  using dhlab::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return DHLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Dimension: return DHLAB_ERR_DIMENSION;
    case ErrorCode::ChartMismatch: return DHLAB_ERR_CHART_MISMATCH;
    case ErrorCode::UnsupportedIntegrand: return DHLAB_ERR_UNSUPPORTED_INTEGRAND;
    case ErrorCode::GaugeRejected: return DHLAB_ERR_GAUGE_REJECTED;
    case ErrorCode::DegenerateWindow: return DHLAB_ERR_DEGENERATE_WINDOW;
    case ErrorCode::Domain: return DHLAB_ERR_DOMAIN;
    case ErrorCode::EmptyMeasure: return DHLAB_ERR_EMPTY_MEASURE;
    case ErrorCode::EmptyPolytope: return DHLAB_ERR_EMPTY_POLYTOPE;
    case ErrorCode::Unbounded: return DHLAB_ERR_UNBOUNDED;
    case ErrorCode::InsufficientData: return DHLAB_ERR_INSUFFICIENT_DATA;
    case ErrorCode::Parse: return DHLAB_ERR_PARSE;
  }
  return DHLAB_ERR_INTERNAL;
}

struct NullPointer {
  const char* what;
};

template <class F>
dhlab_status guarded(F&& body) noexcept {
  try {
    body();
    return DHLAB_OK;
  } catch (const NullPointer& e) {
    last_error = std::string("null pointer: ") + e.what;
    return DHLAB_ERR_NULL_POINTER;
  } catch (const dhlab::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DHLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DHLAB_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return DHLAB_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw NullPointer{what};
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dhlab::Poly density_of(const dhlab::Construction& c) { return dhlab::analytic_dh_density(c.report, c.window); }

}  // namespace

extern "C" {

const char* dhlab_version(void) { return "1.0.0"; }

const char* dhlab_status_name(dhlab_status status) {
  switch (status) {
    case DHLAB_OK: return "ok";
    case DHLAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DHLAB_ERR_DIMENSION: return "dimension mismatch";
    case DHLAB_ERR_CHART_MISMATCH: return "chart mismatch";
    case DHLAB_ERR_UNSUPPORTED_INTEGRAND: return "unsupported integrand";
    case DHLAB_ERR_GAUGE_REJECTED: return "gauge rejected";
    case DHLAB_ERR_DEGENERATE_WINDOW: return "degenerate window";
    case DHLAB_ERR_DOMAIN: return "domain error";
    case DHLAB_ERR_EMPTY_MEASURE: return "empty measure";
    case DHLAB_ERR_EMPTY_POLYTOPE: return "empty polytope";
    case DHLAB_ERR_UNBOUNDED: return "unbounded polytope";
    case DHLAB_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case DHLAB_ERR_PARSE: return "parse error";
    case DHLAB_ERR_NULL_POINTER: return "null pointer";
    case DHLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dhlab_last_error(void) { return last_error.c_str(); }

void dhlab_string_free(char* s) { std::free(s); }

dhlab_status dhlab_construction_create(const char* c1, const char* c2, double lower, double upper,
                                       dhlab_construction** out) {
  return guarded([&] {
    require(c1, "c1");
    require(c2, "c2");
    require(out, "out");
    *out = nullptr;
    dhlab::OmegaParams params{dhlab::parse_rational(c1), dhlab::parse_rational(c2)};
    *out = new dhlab_construction{dhlab::build_construction(params, {lower, upper})};
  });
}

void dhlab_construction_free(dhlab_construction* c) { delete c; }

dhlab_status dhlab_construction_flags(const dhlab_construction* c, dhlab_verify_flags* out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    const auto& r = c->value.report;
    *out = {r.closed, r.moment_identity, r.nondegenerate_on_window, r.chern_computed, r.all_passed()};
  });
}

dhlab_status dhlab_construction_report_json(const dhlab_construction* c, char** out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    const auto& v = c->value;
    nlohmann::json j = dhlab::report_to_json(v.report, *v.chart);
    j["params"] = {{"c1", v.params.c1.get_str()}, {"c2", v.params.c2.get_str()}};
    j["window"] = {v.window.lower, v.window.upper};
    j["chart"] = nlohmann::json::array();
    for (const auto& var : v.chart->variables()) j["chart"].push_back(var.name);
    j["connection"] = dhlab::form_to_json(v.theta);
    j["omega"] = dhlab::form_to_json(v.omega);
    *out = copy_string(j.dump(2) + "\n");
  });
}

dhlab_status dhlab_construction_report_text(const dhlab_construction* c, char** out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    const auto& v = c->value;
    std::string text = "params: c1 = " + v.params.c1.get_str() + ", c2 = " + v.params.c2.get_str() + "\n";
    text += "connection: " + dhlab::to_string(v.theta) + "\n";
    text += "omega: " + dhlab::to_string(v.omega) + "\n";
    text += dhlab::report_to_text(v.report, *v.chart);
    *out = copy_string(text);
  });
}

dhlab_status dhlab_construction_density_at(const dhlab_construction* c, double s, double* out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    *out = dhlab::normalized_density_at(density_of(c->value), c->value.window, s);
  });
}

dhlab_status dhlab_construction_density_string(const dhlab_construction* c, char** out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    *out = copy_string(density_of(c->value).to_string(c->value.chart.get()));
  });
}

void dhlab_sampler_config_default(dhlab_sampler_config* cfg) {
  if (cfg) *cfg = {2'000'000, 40, 42, 0, 0};
}

dhlab_status dhlab_density_run(const dhlab_construction* c, const dhlab_sampler_config* cfg, dhlab_density** out) {
  return guarded([&] {
    require(c, "construction");
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    const auto& v = c->value;
    const std::size_t nvars = v.chart->dimension();
    dhlab::SamplerConfig sc;
    sc.sample_count = cfg->sample_count;
    sc.bins = cfg->bins;
    sc.window = v.window;
    sc.seed = cfg->seed;
    sc.threads = cfg->threads;

    dhlab::Poly top = cfg->flat ? dhlab::Poly::constant(nvars, dhlab::Rational(6)) : v.report.top_power_poly;
    dhlab::Poly analytic = cfg->flat ? dhlab::Poly::constant(nvars, dhlab::Rational(1)) : density_of(v);

    auto d = std::make_unique<dhlab_density>();
    d->estimate = dhlab::normalize(dhlab::sample_pushforward(top, sc));
    d->comparison = dhlab::compare(d->estimate, analytic, v.window);
    d->provenance = {sc.seed, sc.sample_count, v.window,
                     "c1=" + v.params.c1.get_str() + " c2=" + v.params.c2.get_str(), cfg->flat != 0};
    const auto edges = dhlab::uniform_edges(v.window, sc.bins);
    d->center_bin = dhlab::bin_index(edges, 0.5 * (v.window.lower + v.window.upper));
    *out = d.release();
  });
}

void dhlab_density_free(dhlab_density* d) { delete d; }

dhlab_status dhlab_density_summary_get(const dhlab_density* d, dhlab_density_summary* out) {
  return guarded([&] {
    require(d, "density");
    require(out, "out");
    const std::size_t k = d->center_bin;
    *out = {d->comparison.max_rel_error,
            d->comparison.worst_bin,
            d->estimate.density.size(),
            d->comparison.bins_beyond(3.0),
            k,
            d->estimate.bin_centers[k],
            d->estimate.density[k],
            d->comparison.analytic_density[k]};
  });
}

dhlab_status dhlab_density_bin(const dhlab_density* d, size_t k, double* center, double* analytic, double* mc,
                               double* stderr_out, double* z) {
  return guarded([&] {
    require(d, "density");
    if (k >= d->estimate.density.size()) dhlab::fail(dhlab::ErrorCode::InvalidArgument, "bin index out of range");
    if (center) *center = d->estimate.bin_centers[k];
    if (analytic) *analytic = d->comparison.analytic_density[k];
    if (mc) *mc = d->estimate.density[k];
    if (stderr_out) *stderr_out = d->estimate.stderr_[k];
    if (z) *z = d->comparison.per_bin_z[k];
  });
}

dhlab_status dhlab_density_csv(const dhlab_density* d, char** out) {
  return guarded([&] {
    require(d, "density");
    require(out, "out");
    *out = copy_string(dhlab::density_csv(d->estimate, d->comparison, d->provenance));
  });
}

const char* dhlab_generator_name(void) { return dhlab::kGeneratorName; }

dhlab_status dhlab_logconcavity_analytic(const dhlab_construction* c, dhlab_violation** out) {
  return guarded([&] {
    require(c, "construction");
    require(out, "out");
    *out = nullptr;
    const auto& v = c->value;
    *out = new dhlab_violation{dhlab::analytic_logconcavity(density_of(v), {v.window.lower, v.window.upper})};
  });
}

dhlab_status dhlab_logconcavity_discrete(const double* s, const double* f, size_t n, double tol,
                                         dhlab_violation** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (n > 0) {
      require(s, "s");
      require(f, "f");
    }
    std::vector<dhlab::Sample> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = {s[i], f[i]};
    *out = new dhlab_violation{dhlab::discrete_logconcavity(samples, tol)};
  });
}

void dhlab_violation_free(dhlab_violation* v) { delete v; }

int dhlab_violation_log_concave(const dhlab_violation* v) {
  if (!v) return -1;
  return v->value.log_concave ? 1 : 0;
}

size_t dhlab_violation_interval_count(const dhlab_violation* v) {
  return v ? v->value.violation_intervals.size() : 0;
}

dhlab_status dhlab_violation_interval(const dhlab_violation* v, size_t i, double* lo, double* hi) {
  return guarded([&] {
    require(v, "violation");
    if (i >= v->value.violation_intervals.size())
      dhlab::fail(dhlab::ErrorCode::InvalidArgument, "interval index out of range");
    if (lo) *lo = v->value.violation_intervals[i].lo;
    if (hi) *hi = v->value.violation_intervals[i].hi;
  });
}

dhlab_status dhlab_violation_json(const dhlab_violation* v, char** out) {
  return guarded([&] {
    require(v, "violation");
    require(out, "out");
    *out = copy_string(dhlab::violation_to_json(v->value).dump(2) + "\n");
  });
}

dhlab_status dhlab_polytope_parse(const char* json, dhlab_polytope** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new dhlab_polytope{dhlab::polytope_from_json(json)};
  });
}

void dhlab_polytope_free(dhlab_polytope* p) { delete p; }

size_t dhlab_polytope_dim(const dhlab_polytope* p) { return p ? p->value.dim() : 0; }

dhlab_status dhlab_polytope_range(const dhlab_polytope* p, size_t axis, double* lo, double* hi) {
  return guarded([&] {
    require(p, "polytope");
    const auto range = dhlab::projection_range(p->value, axis);
    if (lo) *lo = range.lo;
    if (hi) *hi = range.hi;
  });
}

dhlab_status dhlab_profile_compute(const dhlab_polytope* p, size_t axis, size_t bins, dhlab_slice_method method,
                                   uint64_t mc_n, uint64_t seed, dhlab_profile** out) {
  return guarded([&] {
    require(p, "polytope");
    require(out, "out");
    *out = nullptr;
    const auto m = method == DHLAB_SLICE_EXACT2D ? dhlab::SliceMethod::Exact2d : dhlab::SliceMethod::MonteCarlo;
    *out = new dhlab_profile{dhlab::slice_profile(p->value, axis, bins, m, mc_n, seed)};
  });
}

void dhlab_profile_free(dhlab_profile* f) { delete f; }

size_t dhlab_profile_size(const dhlab_profile* f) { return f ? f->value.grid.size() : 0; }

dhlab_status dhlab_profile_point(const dhlab_profile* f, size_t k, double* s, double* volume, double* stderr_out) {
  return guarded([&] {
    require(f, "profile");
    if (k >= f->value.grid.size()) dhlab::fail(dhlab::ErrorCode::InvalidArgument, "profile index out of range");
    if (s) *s = f->value.grid[k];
    if (volume) *volume = f->value.volumes[k];
    if (stderr_out) *stderr_out = f->value.stderr_[k];
  });
}

dhlab_status dhlab_profile_csv(const dhlab_profile* f, const char* comment, char** out) {
  return guarded([&] {
    require(f, "profile");
    require(out, "out");
    *out = copy_string(dhlab::profile_csv(f->value, comment ? comment : ""));
  });
}

dhlab_status dhlab_profile_prekopa(const dhlab_profile* f, double tol, double sigmas, dhlab_violation** out) {
  return guarded([&] {
    require(f, "profile");
    require(out, "out");
    *out = nullptr;
    *out = new dhlab_violation{dhlab::prekopa_check(f->value, tol, sigmas)};
  });
}

}  // extern "C"
