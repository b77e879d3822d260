// dhlab-cli: verification report, DH density, log-concavity and toric slice
// profiles from the command line. Talks to the library through the C API only.
//
// Exit codes: 0 success / log-concave, 1 operational or verification failure,
// 2 usage or input error, 3 non-log-concavity found.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dhlab/dhlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotLogConcave = 3;

// Acceptance threshold for the density command.
constexpr double kMaxRelativeError = 0.03;

struct RunConfig {
  std::vector<double> window{0.5, 4.5};
  std::uint64_t samples = 2'000'000;
  std::size_t bins = 40;
  std::uint64_t seed = 42;
  std::vector<std::string> params{"2", "3"};
  std::string input_path;
  std::string output_path;
  bool analytic = false;
  bool flat = false;
  std::size_t axis = 0;
  std::string method;
  double tol = 1e-9;
};

struct CString {
  char* ptr = nullptr;
  ~CString() { dhlab_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
};

using Construction = Handle<dhlab_construction, dhlab_construction_free>;
using Density = Handle<dhlab_density, dhlab_density_free>;
using Violation = Handle<dhlab_violation, dhlab_violation_free>;
using Polytope = Handle<dhlab_polytope, dhlab_polytope_free>;
using Profile = Handle<dhlab_profile, dhlab_profile_free>;

// Maps a library status onto an exit code: malformed input is a usage error,
// everything else an operational failure.
int report_status(dhlab_status status, const char* context) {
  std::cerr << "dhlab: " << context << ": " << dhlab_status_name(status) << ": " << dhlab_last_error() << '\n';
  switch (status) {
    case DHLAB_ERR_PARSE:
    case DHLAB_ERR_INVALID_ARGUMENT:
    case DHLAB_ERR_DEGENERATE_WINDOW:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

// Machine output goes to --output when given, otherwise to stdout; the human
// summary then goes to stderr so stdout stays parseable.
class Sink {
 public:
  explicit Sink(const std::string& path) : to_file_(!path.empty()), path_(path) {}

  std::ostream& human() { return to_file_ ? std::cout : std::cerr; }

  bool write(const std::string& payload) {
    if (!to_file_) {
      std::cout << payload;
      return true;
    }
    std::ofstream out(path_, std::ios::binary);
    out << payload;
    if (!out) {
      std::cerr << "dhlab: cannot write " << path_ << '\n';
      return false;
    }
    return true;
  }

 private:
  bool to_file_;
  std::string path_;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int check_window(const RunConfig& cfg) {
  const double a = cfg.window[0], b = cfg.window[1];
  if (!(a > 0.0) || !(a < b)) {
    std::cerr << "dhlab: window must satisfy 0 < A < B (got " << a << ", " << b << ")\n";
    return kExitUsage;
  }
  return kExitOk;
}

int make_construction(const RunConfig& cfg, Construction& c) {
  if (int rc = check_window(cfg)) return rc;
  const dhlab_status st =
      dhlab_construction_create(cfg.params[0].c_str(), cfg.params[1].c_str(), cfg.window[0], cfg.window[1], &c.ptr);
  return st == DHLAB_OK ? kExitOk : report_status(st, "construction");
}

unsigned thread_cap() {
  const char* env = std::getenv("DH_LAB_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (errno != 0 || *end != '\0') return 0;
  return static_cast<unsigned>(v);
}

int cmd_verify(const RunConfig& cfg) {
  Construction c;
  if (int rc = make_construction(cfg, c)) return rc;
  Sink sink(cfg.output_path);
  CString text, json;
  dhlab_construction_report_text(c.ptr, &text.ptr);
  dhlab_construction_report_json(c.ptr, &json.ptr);
  sink.human() << text.str();
  if (!sink.write(json.str())) return kExitFailure;
  dhlab_verify_flags flags{};
  dhlab_construction_flags(c.ptr, &flags);
  if (!flags.passed) {
    sink.human() << "verification failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_density(const RunConfig& cfg) {
  Construction c;
  if (int rc = make_construction(cfg, c)) return rc;
  dhlab_verify_flags flags{};
  dhlab_construction_flags(c.ptr, &flags);
  if (!cfg.flat && !flags.passed) {
    std::cerr << "dhlab: construction does not verify; run the verify command for details\n";
    return kExitFailure;
  }
  if (cfg.bins < 2 || cfg.samples < cfg.bins) {
    std::cerr << "dhlab: need bins >= 2 and samples >= bins\n";
    return kExitUsage;
  }
  dhlab_sampler_config sc;
  dhlab_sampler_config_default(&sc);
  sc.sample_count = cfg.samples;
  sc.bins = cfg.bins;
  sc.seed = cfg.seed;
  sc.threads = thread_cap();
  sc.flat = cfg.flat ? 1 : 0;
  Density d;
  if (dhlab_status st = dhlab_density_run(c.ptr, &sc, &d.ptr); st != DHLAB_OK) return report_status(st, "density");

  Sink sink(cfg.output_path);
  CString csv;
  dhlab_density_csv(d.ptr, &csv.ptr);
  if (!sink.write(csv.str())) return kExitFailure;

  dhlab_density_summary s{};
  dhlab_density_summary_get(d.ptr, &s);
  auto& out = sink.human();
  out << "samples " << cfg.samples << ", bins " << s.bins << ", seed " << cfg.seed << '\n'
      << "max relative error " << s.max_rel_error << " (bin " << s.worst_bin << ")\n"
      << "bins with |z| > 3: " << s.bins_beyond_3sigma << '\n'
      << "center bin s = " << s.center_s << ": mc " << s.center_mc_density << ", analytic "
      << s.center_analytic_density << '\n';
  if (s.max_rel_error > kMaxRelativeError) {
    out << "max relative error exceeds " << kMaxRelativeError << "; increase --samples\n";
    return kExitFailure;
  }
  return kExitOk;
}

// Reads two numeric columns (s, f) from a CSV; '#' lines and one leading
// header row are skipped.
std::optional<std::pair<std::vector<double>, std::vector<double>>> read_samples(const std::string& text) {
  std::vector<double> s, f;
  std::istringstream lines(text);
  bool header_allowed = true;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::istringstream cells(line);
    std::string a, b;
    std::getline(cells, a, ',');
    std::getline(cells, b, ',');
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double va = std::strtod(a.c_str(), &end_a);
    const double vb = std::strtod(b.c_str(), &end_b);
    const bool numeric = !a.empty() && !b.empty() && *end_a == '\0' && (*end_b == '\0' || *end_b == ' ');
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      return std::nullopt;
    }
    header_allowed = false;
    s.push_back(va);
    f.push_back(vb);
  }
  return std::make_pair(std::move(s), std::move(f));
}

int cmd_logconcavity(const RunConfig& cfg) {
  if (cfg.analytic == !cfg.input_path.empty()) {
    std::cerr << "dhlab: logconcavity needs exactly one of --analytic or --input\n";
    return kExitUsage;
  }
  Violation v;
  Sink sink(cfg.output_path);
  if (cfg.analytic) {
    Construction c;
    if (int rc = make_construction(cfg, c)) return rc;
    if (dhlab_status st = dhlab_logconcavity_analytic(c.ptr, &v.ptr); st != DHLAB_OK)
      return report_status(st, "analytic log-concavity");
    CString density;
    dhlab_construction_density_string(c.ptr, &density.ptr);
    sink.human() << "density " << density.str() << " on [" << cfg.window[0] << ", " << cfg.window[1] << "]\n";
  } else {
    const auto text = read_file(cfg.input_path);
    if (!text) {
      std::cerr << "dhlab: cannot read " << cfg.input_path << '\n';
      return kExitFailure;
    }
    const auto samples = read_samples(*text);
    if (!samples) {
      std::cerr << "dhlab: " << cfg.input_path << " is not a two-column numeric CSV\n";
      return kExitUsage;
    }
    const auto& [s, f] = *samples;
    dhlab_status st = dhlab_logconcavity_discrete(s.data(), f.data(), s.size(), cfg.tol, &v.ptr);
    if (st == DHLAB_ERR_DOMAIN) {
      std::cerr << "dhlab: " << dhlab_last_error() << '\n';
      return kExitFailure;
    }
    if (st != DHLAB_OK) return report_status(st, "discrete log-concavity");
  }

  CString json;
  dhlab_violation_json(v.ptr, &json.ptr);
  if (!sink.write(json.str())) return kExitFailure;
  const bool concave = dhlab_violation_log_concave(v.ptr) != 0;
  auto& out = sink.human();
  if (concave) {
    out << "log-concave\n";
    return kExitOk;
  }
  out << "NOT log-concave; g > 0 on:\n";
  const std::size_t n = dhlab_violation_interval_count(v.ptr);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = 0, hi = 0;
    dhlab_violation_interval(v.ptr, i, &lo, &hi);
    char buf[96];
    std::snprintf(buf, sizeof buf, "  (%.10f, %.10f)\n", lo, hi);
    out << buf;
  }
  return kExitNotLogConcave;
}

int cmd_toric(const RunConfig& cfg, bool samples_given, bool bins_given) {
  if (cfg.input_path.empty()) {
    std::cerr << "dhlab: toric needs --input POLYTOPE.json\n";
    return kExitUsage;
  }
  const auto text = read_file(cfg.input_path);
  if (!text) {
    std::cerr << "dhlab: cannot read " << cfg.input_path << '\n';
    return kExitFailure;
  }
  Polytope p;
  if (dhlab_status st = dhlab_polytope_parse(text->c_str(), &p.ptr); st != DHLAB_OK)
    return report_status(st, "polytope");
  const std::size_t dim = dhlab_polytope_dim(p.ptr);
  if (cfg.axis >= dim) {
    std::cerr << "dhlab: --axis " << cfg.axis << " outside dimension " << dim << '\n';
    return kExitUsage;
  }
  std::string method = cfg.method.empty() ? (dim == 2 ? "exact2d" : "mc") : cfg.method;
  if (method == "exact2d" && dim != 2) {
    std::cerr << "dhlab: --method exact2d needs a 2-d polytope\n";
    return kExitUsage;
  }
  const auto m = method == "exact2d" ? DHLAB_SLICE_EXACT2D : DHLAB_SLICE_MC;
  const std::uint64_t per_bin = samples_given ? cfg.samples : 100'000;
  const std::size_t bins = bins_given ? cfg.bins : 40;

  Profile f;
  dhlab_status st = dhlab_profile_compute(p.ptr, cfg.axis, bins, m, per_bin, cfg.seed, &f.ptr);
  if (st == DHLAB_ERR_UNBOUNDED || st == DHLAB_ERR_EMPTY_POLYTOPE) {
    std::cerr << "dhlab: " << dhlab_last_error() << '\n';
    return kExitFailure;
  }
  if (st != DHLAB_OK) return report_status(st, "slice profile");

  std::ostringstream comment;
  comment << "dhlab slice profile\naxis: " << cfg.axis << "\nmethod: " << method;
  if (m == DHLAB_SLICE_MC) comment << "\nseed: " << cfg.seed << "\nsamples_per_bin: " << per_bin;
  CString csv;
  dhlab_profile_csv(f.ptr, comment.str().c_str(), &csv.ptr);
  Sink sink(cfg.output_path);
  if (!sink.write(csv.str())) return kExitFailure;

  Violation v;
  const double sigmas = m == DHLAB_SLICE_MC ? 4.0 : 0.0;
  if (st = dhlab_profile_prekopa(f.ptr, cfg.tol, sigmas, &v.ptr); st != DHLAB_OK)
    return report_status(st == DHLAB_ERR_INSUFFICIENT_DATA ? DHLAB_ERR_INTERNAL : st, "log-concavity of profile");
  CString json;
  dhlab_violation_json(v.ptr, &json.ptr);
  sink.human() << json.str();
  if (dhlab_violation_log_concave(v.ptr)) {
    sink.human() << "slice profile is log-concave\n";
    return kExitOk;
  }
  sink.human() << "slice profile is NOT log-concave\n";
  return kExitNotLogConcave;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Duistermaat-Heckman measure toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_window = [&](CLI::App* sub) {
    sub->add_option("--window", cfg.window, "cut window A B")->expected(2);
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--params", cfg.params, "omega constants c1 c2 (exact rationals)")->expected(2);
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("--output", cfg.output_path, "output file"); };

  auto* verify = app.add_subcommand("verify", "symbolic verification of the construction");
  add_window(verify);
  add_params(verify);
  add_output(verify);

  auto* density = app.add_subcommand("density", "Monte-Carlo DH density against the analytic one");
  add_window(density);
  add_params(density);
  add_output(density);
  density->add_option("--samples", cfg.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  density->add_option("--bins", cfg.bins, "histogram bins");
  density->add_option("--seed", cfg.seed, "random seed");
  density->add_flag("--flat", cfg.flat, "constant Liouville density");

  auto* logc = app.add_subcommand("logconcavity", "log-concavity analysis");
  add_window(logc);
  add_params(logc);
  add_output(logc);
  logc->add_flag("--analytic", cfg.analytic, "analyze the analytic DH density");
  logc->add_option("--input", cfg.input_path, "CSV of (s, f) samples on a uniform grid");
  logc->add_option("--tol", cfg.tol, "relative slack of the midpoint test");

  auto* toric = app.add_subcommand("toric", "slice-volume profile of a polytope");
  add_output(toric);
  toric->add_option("--input", cfg.input_path, "polytope JSON");
  toric->add_option("--axis", cfg.axis, "projection axis");
  auto* toric_bins = toric->add_option("--bins", cfg.bins, "profile bins");
  auto* toric_samples = toric->add_option("--samples", cfg.samples, "Monte-Carlo samples per bin");
  toric->add_option("--seed", cfg.seed, "random seed");
  toric->add_option("--method", cfg.method, "exact2d or mc")->check(CLI::IsMember({"exact2d", "mc"}));
  toric->add_option("--tol", cfg.tol, "relative slack of the midpoint test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (verify->parsed()) return cmd_verify(cfg);
  if (density->parsed()) return cmd_density(cfg);
  if (logc->parsed()) return cmd_logconcavity(cfg);
  if (toric->parsed()) return cmd_toric(cfg, toric_samples->count() > 0, toric_bins->count() > 0);
  return kExitUsage;
}
