#include "dhlab/dh_measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "dhlab/error.hpp"
#include "dhlab/logconcavity.hpp"

namespace dhlab {

const char* const kGeneratorName =
    "mt19937_64; per-block seed_seq{seed_lo32, seed_hi32, block_lo32, block_hi32}; "
    "block = 16384 samples; u = (x >> 11) * 2^-53";

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct BlockSums {
  std::vector<CompensatedSum> w, w2;
  CompensatedSum total, total2;
  std::uint64_t accepted = 0;
};

std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct SubBox {
  bool active = false;
  double lo[5] = {0, 0, 0, 0, 0};
  double hi[5] = {1, 1, 1, 1, 1};
};

Histogram run_sampler(const Poly& top_poly, const SamplerConfig& cfg, const SubBox& box) {
  cfg.validate();
  if (top_poly.nvars() != 6) fail(ErrorCode::Dimension, "top-power polynomial must live on the 6-variable fiber chart");
  const PolyEvaluator weight(top_poly);
  const std::vector<double> edges = uniform_edges(cfg.window, cfg.bins);
  const std::uint64_t blocks = (cfg.sample_count + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> partial(blocks);

  const double a = cfg.window.lower, width = cfg.window.width();
  auto run_block = [&](std::uint64_t b) {
    BlockSums& out = partial[b];
    out.w.resize(cfg.bins);
    out.w2.resize(cfg.bins);
    auto rng = block_generator(cfg.seed, b);
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(cfg.sample_count, begin + kBlockSize);
    double point[6];
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int k = 0; k < 6; ++k) point[k] = uniform01(rng);
      point[4] = a + width * point[4];
      if (box.active) {
        static constexpr int fiber_axes[5] = {0, 1, 2, 3, 5};
        bool inside = true;
        for (int k = 0; k < 5; ++k) {
          const double x = point[fiber_axes[k]];
          inside = inside && x >= box.lo[k] && x < box.hi[k];
        }
        if (!inside) continue;
      }
      const std::size_t bin = bin_index(edges, point[4]);
      if (bin >= cfg.bins) continue;
      const double w = weight(point);
      out.w[bin].add(w);
      out.w2[bin].add(w * w);
      out.total.add(w);
      out.total2.add(w * w);
      ++out.accepted;
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
      });
  }

  // Merge in block order so the result does not depend on scheduling.
  std::vector<CompensatedSum> w(cfg.bins), w2(cfg.bins);
  CompensatedSum total, total2;
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < cfg.bins; ++k) {
      w[k].add(p.w[k].value());
      w2[k].add(p.w2[k].value());
    }
    total.add(p.total.value());
    total2.add(p.total2.value());
  }
  Histogram h;
  h.bin_edges = edges;
  h.weight_sums.resize(cfg.bins);
  h.weight_sq_sums.resize(cfg.bins);
  CompensatedSum check;
  for (std::size_t k = 0; k < cfg.bins; ++k) {
    h.weight_sums[k] = w[k].value();
    h.weight_sq_sums[k] = w2[k].value();
    check.add(h.weight_sums[k]);
  }
  // Total is the sum of the reported bins, not an independent accumulator.
  h.total_weight = check.value();
  h.total_weight_sq = total2.value();
  h.sample_count = cfg.sample_count;
  return h;
}

}  // namespace

void SamplerConfig::validate() const {
  window.validate();
  if (bins < 2) fail(ErrorCode::InvalidArgument, "need at least 2 bins");
  if (sample_count == 0 || sample_count < bins)
    fail(ErrorCode::InvalidArgument, "sample count must be positive and at least the bin count");
}

std::size_t ComparisonReport::bins_beyond(double z) const {
  return static_cast<std::size_t>(
      std::count_if(per_bin_z.begin(), per_bin_z.end(), [z](double v) { return std::abs(v) > z; }));
}

double liouville_weight(const Poly& top_poly, std::span<const double> point) { return top_poly.evaluate(point); }

std::vector<double> uniform_edges(const CutWindow& window, std::size_t bins) {
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    edges[k] = window.lower + window.width() * (static_cast<double>(k) / static_cast<double>(bins));
  edges.back() = window.upper;
  return edges;
}

std::size_t bin_index(std::span<const double> edges, double t) {
  const std::size_t bins = edges.size() - 1;
  if (!(t >= edges.front() && t <= edges.back())) return bins;
  if (t == edges.back()) return bins - 1;
  const double width = (edges.back() - edges.front()) / static_cast<double>(bins);
  auto k = static_cast<std::size_t>(std::floor((t - edges.front()) / width));
  k = std::min(k, bins - 1);
  while (k > 0 && t < edges[k]) --k;
  while (k + 1 < bins && t >= edges[k + 1]) ++k;
  return k;
}

Histogram sample_pushforward(const Poly& top_poly, const SamplerConfig& cfg) {
  return run_sampler(top_poly, cfg, SubBox{});
}

Histogram sample_pushforward(const Poly& top_poly, const SamplerConfig& cfg, std::span<const double, 5> box_lo,
                             std::span<const double, 5> box_hi) {
  SubBox box;
  box.active = true;
  for (int k = 0; k < 5; ++k) {
    if (!(box_lo[k] >= 0.0 && box_lo[k] < box_hi[k] && box_hi[k] <= 1.0))
      fail(ErrorCode::InvalidArgument, "sub-box must be a nonempty box inside [0,1)^5");
    box.lo[k] = box_lo[k];
    box.hi[k] = box_hi[k];
  }
  return run_sampler(top_poly, cfg, box);
}

DensityEstimate normalize(const Histogram& h) {
  if (!(h.total_weight > 0.0)) fail(ErrorCode::EmptyMeasure, "histogram carries no weight");
  DensityEstimate est;
  const std::size_t bins = h.bins();
  const double total = h.total_weight;
  double total_sq = h.total_weight_sq;
  if (total_sq == 0.0)
    for (double v : h.weight_sq_sums) total_sq += v;
  for (std::size_t k = 0; k < bins; ++k) {
    const double width = h.bin_edges[k + 1] - h.bin_edges[k];
    const double r = h.weight_sums[k] / total;
    // Delta method for the ratio of sums: Var(r) ≈ Σ(y_i - r x_i)^2 / (Σ x_i)^2
    // with y_i = x_i inside bin k and 0 outside.
    const double spread = h.weight_sq_sums[k] * (1.0 - 2.0 * r) + r * r * total_sq;
    est.bin_centers.push_back(0.5 * (h.bin_edges[k] + h.bin_edges[k + 1]));
    est.bin_widths.push_back(width);
    est.density.push_back(r / width);
    est.stderr_.push_back(std::sqrt(std::max(0.0, spread)) / total / width);
  }
  return est;
}

double normalized_density_at(const Poly& analytic, const CutWindow& window, double s) {
  const std::size_t var = univariate_variable(analytic);
  if (analytic.nvars() == 0) fail(ErrorCode::InvalidArgument, "analytic density has no variables");
  const Rational mass = integrate_on_window(analytic, var, window);
  if (sgn(mass) <= 0) fail(ErrorCode::Domain, "analytic density has nonpositive mass on the window");
  if (!(s >= window.lower && s <= window.upper)) return 0.0;
  return Rational(analytic.evaluate_at_exact(var, rational_from_double(s)) / mass).get_d();
}

ComparisonReport compare(const DensityEstimate& est, const Poly& analytic, const CutWindow& window) {
  window.validate();
  const std::size_t var = univariate_variable(analytic);
  if (analytic.nvars() == 0) fail(ErrorCode::InvalidArgument, "analytic density has no variables");
  const Rational mass = integrate_on_window(analytic, var, window);
  if (sgn(mass) <= 0) fail(ErrorCode::Domain, "analytic density has nonpositive mass on the window");

  ComparisonReport cmp;
  for (std::size_t k = 0; k < est.density.size(); ++k) {
    const double expected =
        Rational(analytic.evaluate_at_exact(var, rational_from_double(est.bin_centers[k])) / mass).get_d();
    if (!(expected > 0.0)) fail(ErrorCode::Domain, "analytic density is not positive on the window");
    const double diff = est.density[k] - expected;
    const double rel = std::abs(diff) / expected;
    cmp.analytic_density.push_back(expected);
    cmp.per_bin_z.push_back(est.stderr_[k] > 0.0 ? diff / est.stderr_[k] : 0.0);
    if (k == 0 || rel > cmp.max_rel_error) {
      cmp.max_rel_error = rel;
      cmp.worst_bin = k;
    }
  }
  return cmp;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string density_csv(const DensityEstimate& est, const ComparisonReport& cmp, const CsvProvenance& p) {
  std::ostringstream os;
  os << "# dhlab density\n"
     << "# generator: " << kGeneratorName << "\n"
     << "# seed: " << p.seed << "\n"
     << "# samples: " << p.sample_count << "\n"
     << "# window: " << fmt(p.window.lower) << " " << fmt(p.window.upper) << "\n"
     << "# params: " << p.params << "\n"
     << "# mode: " << (p.flat ? "flat" : "liouville") << "\n"
     << "bin_center,analytic_density,mc_density,stderr,z_score\n";
  for (std::size_t k = 0; k < est.density.size(); ++k)
    os << fmt(est.bin_centers[k]) << ',' << fmt(cmp.analytic_density[k]) << ',' << fmt(est.density[k]) << ','
       << fmt(est.stderr_[k]) << ',' << fmt(cmp.per_bin_z[k]) << '\n';
  return os.str();
}

}  // namespace dhlab
