#include "lhv/harness.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv {
namespace {

void require_trials(const RunConfig& c) {
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (c.streams < 1) throw std::invalid_argument("streams must be >= 1");
}

}  // namespace

std::vector<StreamPlan> partition_streams(std::uint64_t seed, int streams, std::uint64_t trials,
                                          std::uint64_t stream_offset) {
  if (streams < 1) throw std::invalid_argument("streams must be >= 1");
  const auto s = static_cast<std::uint64_t>(streams);
  std::vector<StreamPlan> plans;
  plans.reserve(s);
  for (std::uint64_t i = 0; i < s; ++i) {
    plans.push_back({seed, stream_offset + i, trials / s + (i < trials % s ? 1 : 0)});
  }
  return plans;
}

EstimateWithError OutcomeTally::correlation() const {
  const std::uint64_t n = total();
  if (n == 0) return {};
  const auto concordant = static_cast<std::int64_t>(counts[0] + counts[3]);
  const auto discordant = static_cast<std::int64_t>(counts[1] + counts[2]);
  const double e = static_cast<double>(concordant - discordant) / static_cast<double>(n);
  return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n)), n};
}

std::array<double, 4> OutcomeTally::frequencies() const {
  const double n = static_cast<double>(total());
  std::array<double, 4> f{};
  for (std::size_t i = 0; i < 4; ++i) f[i] = n > 0 ? static_cast<double>(counts[i]) / n : 0.0;
  return f;
}

std::vector<OutcomeTally> run_pair_streams(const RunConfig& config, std::uint64_t stream_offset) {
  require_trials(config);
  const auto plans = partition_streams(config.seed, config.streams, config.trials, stream_offset);
  const MeasurementSetting setting = config.setting;
  return run_streams<OutcomeTally>(plans, [setting](const StreamPlan& plan) {
    Philox4x32 rng(plan.seed, plan.stream);
    OutcomeTally tally;
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      const TrialOutcome o = measure_pair(sample_hidden(rng, setting.n()), setting);
      tally.add(o.s_a, o.s_b);
    }
    return tally;
  });
}

EstimateWithError estimate_correlation(const RunConfig& config) {
  return merge_tallies(run_pair_streams(config)).correlation();
}

std::vector<ScanRow> scan_correlation(const std::vector<Angle>& delta_grid, const RunConfig& config) {
  std::vector<ScanRow> rows;
  rows.reserve(delta_grid.size());
  for (std::size_t r = 0; r < delta_grid.size(); ++r) {
    RunConfig row = config;
    row.setting = MeasurementSetting(delta_grid[r], Angle(0.0), config.setting.n());
    const auto est = merge_tallies(run_pair_streams(row, static_cast<std::uint64_t>(r) << 32)).correlation();
    rows.push_back({delta_grid[r].rad(), est, correlation(delta_grid[r])});
  }
  return rows;
}

void ChshTally::merge(const ChshTally& o) {
  sum += o.sum;
  sum_sq += o.sum_sq;
  n += o.n;
  for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += o.histogram[i];
}

std::vector<ChshTally> run_chsh_streams(const ChshSetting& setting, const RunConfig& config) {
  require_trials(config);
  const auto plans = partition_streams(config.seed, config.streams, config.trials);
  const int n = config.setting.n();
  const Angle phi = config.setting.phi();
  const auto orientations = setting.terms();
  std::array<MeasurementSetting, 4> settings{
      MeasurementSetting(orientations[0], phi, n), MeasurementSetting(orientations[1], phi, n),
      MeasurementSetting(orientations[2], phi, n), MeasurementSetting(orientations[3], phi, n)};
  constexpr std::array<int, 4> signs{1, 1, 1, -1};
  const bool gauge_fixed = config.chsh_estimator == ChshEstimator::GaugeFixed;

  return run_streams<ChshTally>(plans, [&](const StreamPlan& plan) {
    Philox4x32 rng(plan.seed, plan.stream);
    ChshTally tally;
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      int x = 0;
      if (gauge_fixed) {
        const HiddenConfig h = sample_hidden(rng, n);
        const int s_a = response(h.omega_a);
        for (std::size_t k = 0; k < 4; ++k) x += signs[k] * s_a * response(b_frame_coordinate(h.omega_a, settings[k]));
      } else {
        for (std::size_t k = 0; k < 4; ++k) {
          const TrialOutcome o = measure_pair(sample_hidden(rng, n), settings[k]);
          x += signs[k] * o.s_a * o.s_b;
        }
      }
      tally.add(x);
    }
    return tally;
  });
}

ChshResult estimate_chsh(const ChshSetting& setting, const RunConfig& config) {
  const ChshTally t = merge_tallies(run_chsh_streams(setting, config));
  const double n = static_cast<double>(t.n);
  const double mean = static_cast<double>(t.sum) / n;
  const double var = std::max(0.0, static_cast<double>(t.sum_sq) / n - mean * mean);
  ChshResult r;
  r.estimate = {mean, std::sqrt(var / n), t.n};
  r.outside_fraction = static_cast<double>(t.outside_pm2()) / n;
  r.tally = t;
  return r;
}

namespace {

struct WZPartial {
  std::vector<OutcomeTally> cells;
  std::vector<WZTrialRecord> records;
  void merge(const WZPartial& o) {
    if (cells.empty()) cells.resize(o.cells.size());
    for (std::size_t i = 0; i < o.cells.size(); ++i) cells[i].merge(o.cells[i]);
    records.insert(records.end(), o.records.begin(), o.records.end());
  }
};

std::size_t pick(Philox4x32& rng, std::size_t size) {
  return size == 1 ? 0 : static_cast<std::size_t>(rng.below(size));
}

}  // namespace

WZResult run_weihs_zeilinger(const WZOptions& options, const RunConfig& config) {
  require_trials(config);
  if (options.alpha_choices.empty() || options.beta_choices.empty()) {
    throw std::invalid_argument("modulator choice sets must be non-empty");
  }
  const std::size_t na = options.alpha_choices.size();
  const std::size_t nb = options.beta_choices.size();
  const Angle delta_omega = config.setting.delta_omega();
  const int n = config.setting.n();

  const auto plans = partition_streams(config.seed, config.streams, config.trials);
  const auto partial = run_streams<WZPartial>(plans, [&](const StreamPlan& plan) {
    Philox4x32 rng(plan.seed, plan.stream);
    WZPartial p;
    p.cells.resize(na * nb);
    if (options.keep_records) p.records.reserve(plan.trials);
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      const std::size_t ia = pick(rng, na);
      const std::size_t ib = pick(rng, nb);
      const Angle alpha = options.alpha_choices[ia];
      const Angle beta = options.beta_choices[ib];
      const MeasurementSetting shifted(delta_omega, options.base_phi - (alpha + beta), n);
      const TrialOutcome o = measure_pair(sample_hidden(rng, n), shifted);
      p.cells[ia * nb + ib].add(o.s_a, o.s_b);
      if (options.keep_records) p.records.push_back({alpha, beta, o.s_a, o.s_b, o.omega_a});
    }
    return p;
  });
  WZPartial total = merge_tallies(partial);

  WZResult r;
  r.trials = config.trials;
  r.records = std::move(total.records);
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t ib = 0; ib < nb; ++ib) r.cells.push_back({ia, ib, total.cells[ia * nb + ib]});

  const auto [a0, a1, b0, b1] = options.chsh_cells;
  if (a0 < na && a1 < na && b0 < nb && b1 < nb && a0 != a1 && b0 != b1) {
    const std::array<EstimateWithError, 4> e{
        total.cells[a0 * nb + b0].correlation(), total.cells[a0 * nb + b1].correlation(),
        total.cells[a1 * nb + b0].correlation(), total.cells[a1 * nb + b1].correlation()};
    const double sum = e[0].value + e[1].value + e[2].value + e[3].value;
    double var = 0.0;
    for (const auto& x : e) var += x.std_error * x.std_error;
    double best = -1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double s = std::abs(sum - 2.0 * e[k].value);
      if (s > best) {
        best = s;
        r.chsh_minus_cell = k;
      }
    }
    std::uint64_t used = 0;
    for (const auto& x : e) used += x.n;
    r.chsh = {best, std::sqrt(var), used};
    r.chsh_available = true;
  }
  return r;
}

}  // namespace lhv
