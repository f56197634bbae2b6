#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "lhv/analytic.hpp"
#include "lhv/core_model.hpp"

namespace lhv {

enum class ChshEstimator {
  GaugeFixed,   // one omega_a shared by the four B orientations
  Independent,  // a fresh configuration for each correlation term
};

struct RunConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 20160101;
  int streams = 1;
  MeasurementSetting setting{Angle(0.0), Angle(0.0), 1};
  ChshEstimator chsh_estimator = ChshEstimator::GaugeFixed;
};

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// One independent random stream: Philox keyed by `seed`, counter block
/// `stream`, producing `trials` trials.
struct StreamPlan {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t trials = 0;
};

/// Splits `trials` over `streams` streams with ids offset, offset + 1, ...
/// The first trials % streams streams take one extra trial.
std::vector<StreamPlan> partition_streams(std::uint64_t seed, int streams, std::uint64_t trials,
                                          std::uint64_t stream_offset = 0);

/// Runs `body(plan)` for every plan, concurrently, and returns the partial
/// results indexed by plan position. Completion order never matters.
template <class Tally, class Body>
std::vector<Tally> run_streams(const std::vector<StreamPlan>& plans, Body body) {
  std::vector<Tally> partial(plans.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t first = 0; first < plans.size(); first += width) {
    std::vector<std::thread> pool;
    const std::size_t last = std::min(plans.size(), first + width);
    for (std::size_t i = first; i < last; ++i) {
      pool.emplace_back([&, i] { partial[i] = body(plans[i]); });
    }
    for (auto& t : pool) t.join();
  }
  return partial;
}

/// Folds partial tallies by stream index (or in reverse, for checking that
/// the merge does not depend on order).
template <class Tally>
Tally merge_tallies(const std::vector<Tally>& partial, bool reversed = false) {
  Tally total;
  if (reversed) {
    for (auto it = partial.rbegin(); it != partial.rend(); ++it) total.merge(*it);
  } else {
    for (const auto& t : partial) total.merge(t);
  }
  return total;
}

/// Exact integer counts of the four joint outcomes, ordered (++, +-, -+, --).
struct OutcomeTally {
  std::array<std::uint64_t, 4> counts{};

  void add(int s_a, int s_b) { ++counts[(s_a > 0 ? 0 : 2) + (s_b > 0 ? 0 : 1)]; }
  void merge(const OutcomeTally& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  }
  [[nodiscard]] std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  /// Mean of s_a * s_b with binomial error sqrt((1 - E^2) / n).
  [[nodiscard]] EstimateWithError correlation() const;
  [[nodiscard]] std::array<double, 4> frequencies() const;
  friend bool operator==(const OutcomeTally&, const OutcomeTally&) = default;
};

/// Per-stream tallies of measure_pair outcomes for config.setting.
std::vector<OutcomeTally> run_pair_streams(const RunConfig& config, std::uint64_t stream_offset = 0);

EstimateWithError estimate_correlation(const RunConfig& config);

struct ScanRow {
  double delta = 0.0;
  EstimateWithError estimate;
  double analytic = 0.0;
};

/// One estimate per effective parameter; each row uses its own block of
/// stream ids so rows are statistically independent. The analytic column is
/// -cos(delta).
std::vector<ScanRow> scan_correlation(const std::vector<Angle>& delta_grid, const RunConfig& config);

/// Integer accounting of the per-trial CHSH variable, which takes values in
/// {-4, -2, 0, 2, 4}.
struct ChshTally {
  std::int64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t n = 0;
  std::array<std::uint64_t, 5> histogram{};

  void add(int x) {
    sum += x;
    sum_sq += static_cast<std::uint64_t>(x * x);
    ++n;
    ++histogram[static_cast<std::size_t>((x + 4) / 2)];
  }
  void merge(const ChshTally& o);
  [[nodiscard]] std::uint64_t outside_pm2() const { return histogram[0] + histogram[4]; }
  friend bool operator==(const ChshTally&, const ChshTally&) = default;
};

struct ChshResult {
  EstimateWithError estimate;  // signed mean of the per-trial variable
  double outside_fraction = 0.0;
  ChshTally tally;
};

std::vector<ChshTally> run_chsh_streams(const ChshSetting& setting, const RunConfig& config);

/// Per-trial S_A (S' + S'' + S''' - S''''), with the four B outcomes at the
/// relative orientations of `setting` (shifted by config.setting.phi).
ChshResult estimate_chsh(const ChshSetting& setting, const RunConfig& config);

struct WZTrialRecord {
  Angle alpha;
  Angle beta;
  int s_a = 1;
  int s_b = 1;
  Angle omega_a;
};

struct WZOptions {
  Angle base_phi;
  std::vector<Angle> alpha_choices;
  std::vector<Angle> beta_choices;
  /// Indices (alpha0, alpha1, beta0, beta1) of the 2x2 sub-grid for CHSH.
  std::array<std::size_t, 4> chsh_cells{0, 1, 0, 1};
  bool keep_records = false;
};

struct WZCell {
  std::size_t alpha_index = 0;
  std::size_t beta_index = 0;
  OutcomeTally tally;
};

struct WZResult {
  std::vector<WZTrialRecord> records;
  std::vector<WZCell> cells;  // alpha-major
  std::uint64_t trials = 0;
  /// max over the four sign placements of |E00 + E01 + E10 + E11 - 2 E_k|
  EstimateWithError chsh;
  std::size_t chsh_minus_cell = 0;  // 0..3 within the sub-grid, alpha-major
  bool chsh_available = false;
};

/// Each trial picks alpha and beta independently and uniformly from their
/// choice sets; the modulators shift the phase to base_phi - (alpha + beta).
/// Single-element choice sets consume no random draws.
WZResult run_weihs_zeilinger(const WZOptions& options, const RunConfig& config);

}  // namespace lhv
