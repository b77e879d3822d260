#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dhlab/construction.hpp"
#include "dhlab/poly.hpp"

namespace dhlab {

/// Samples per random stream block. Sample i belongs to block i / kBlockSize,
/// whose generator is seeded from (seed, block index); workers take whole
/// blocks, so the sampled points do not depend on the worker count.
inline constexpr std::uint64_t kBlockSize = 1u << 14;

/// Name recorded in output metadata.
extern const char* const kGeneratorName;

struct SamplerConfig {
  std::uint64_t sample_count = 2'000'000;
  std::size_t bins = 40;
  CutWindow window;
  std::uint64_t seed = 42;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<double> weight_sums;
  std::vector<double> weight_sq_sums;
  double total_weight = 0.0;
  double total_weight_sq = 0.0;
  std::uint64_t sample_count = 0;

  std::size_t bins() const noexcept { return weight_sums.size(); }
  bool operator==(const Histogram&) const = default;
};

struct DensityEstimate {
  std::vector<double> bin_centers;
  std::vector<double> bin_widths;
  std::vector<double> density;
  std::vector<double> stderr_;
};

struct ComparisonReport {
  double max_rel_error = 0.0;
  std::vector<double> analytic_density;
  std::vector<double> per_bin_z;
  std::size_t worst_bin = 0;

  std::size_t bins_beyond(double z) const;
};

/// Liouville density (the top-power coefficient) at a chart point.
double liouville_weight(const Poly& top_poly, std::span<const double> point);

/// Uniform points in [0,1)^4 × [A,B) × [0,1), binned by t with weight
/// liouville_weight. Deterministic in (top_poly, cfg) and independent of
/// cfg.threads.
Histogram sample_pushforward(const Poly& top_poly, const SamplerConfig& cfg);

/// Same, restricted to points whose five fiber/torus coordinates (x1..x4,
/// theta) fall in the given sub-box; used to test that the density depends
/// on t alone.
Histogram sample_pushforward(const Poly& top_poly, const SamplerConfig& cfg,
                             std::span<const double, 5> box_lo,
                             std::span<const double, 5> box_hi);

/// Uniform edges on [A, B]; last edge is exactly B.
std::vector<double> uniform_edges(const CutWindow& window, std::size_t bins);
/// Half-open bins, last bin closed. Returns bins when t is outside.
std::size_t bin_index(std::span<const double> edges, double t);

/// Normalized density with delta-method standard errors for the ratio
/// W_k / W_total.
DensityEstimate normalize(const Histogram& h);

/// Compares against the analytic density normalized exactly over the window.
/// z is (mc - analytic) / stderr, and 0 where stderr is 0.
ComparisonReport compare(const DensityEstimate& est, const Poly& analytic,
                         const CutWindow& window);

/// Exactly normalized analytic density evaluated at s; 0 outside the window.
double normalized_density_at(const Poly& analytic, const CutWindow& window, double s);

struct CsvProvenance {
  std::uint64_t seed = 0;
  std::uint64_t sample_count = 0;
  CutWindow window;
  std::string params;
  bool flat = false;
};

/// bin_center,analytic_density,mc_density,stderr,z_score with a # header.
std::string density_csv(const DensityEstimate& est, const ComparisonReport& cmp,
                        const CsvProvenance& provenance);

}  // namespace dhlab
