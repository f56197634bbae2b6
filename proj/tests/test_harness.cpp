#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lhv/analytic.hpp"
#include "lhv/harness.hpp"

using namespace lhv;

namespace {
RunConfig config(double delta, std::uint64_t trials, int streams = 4, std::uint64_t seed = 77) {
  RunConfig c;
  c.trials = trials;
  c.seed = seed;
  c.streams = streams;
  c.setting = MeasurementSetting(Angle(delta), Angle(0.0));
  return c;
}
const ChshSetting kOptimal{Angle(kPi / 2), Angle(kPi / 4), Angle(-kPi / 4)};
}  // namespace

TEST_CASE("partition_streams") {
  const auto p = partition_streams(5, 4, 10, 100);
  REQUIRE(p.size() == 4);
  CHECK(p[0].trials == 3);
  CHECK(p[1].trials == 3);
  CHECK(p[2].trials == 2);
  CHECK(p[3].trials == 2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i].seed == 5);
    CHECK(p[i].stream == 100 + i);
  }
  CHECK_THROWS_AS(partition_streams(5, 0, 10), std::invalid_argument);
}

TEST_CASE("correlation estimates") {
  auto e = estimate_correlation(config(0.0, 100000));
  CHECK(e.value == -1.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.n == 100000);
  e = estimate_correlation(config(kPi / 2, 1000000));
  CHECK(std::abs(e.value) < 4 * 0.001);
  e = estimate_correlation(config(kPi / 3, 1000000));
  CHECK(std::abs(e.value + 0.5) < 4 * e.std_error);
}

TEST_CASE("determinism and merge order") {
  const auto a = run_pair_streams(config(1.0, 50000, 5));
  const auto b = run_pair_streams(config(1.0, 50000, 5));
  CHECK(a == b);
  CHECK(merge_tallies(a) == merge_tallies(a, true));
  const auto one = merge_tallies(run_pair_streams(config(1.0, 50000, 1)));
  CHECK(one.total() == merge_tallies(a).total());
  const auto c = run_chsh_streams(kOptimal, config(0.0, 20000, 3));
  CHECK(merge_tallies(c) == merge_tallies(c, true));
}

TEST_CASE("scan rows use separate streams") {
  const auto rows = scan_correlation({Angle(1.0), Angle(1.0)}, config(0.0, 20000));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].estimate.value != rows[1].estimate.value);
  CHECK(rows[0].analytic == doctest::Approx(-std::cos(1.0)));
}

TEST_CASE("CHSH estimates") {
  auto r = estimate_chsh(kOptimal, config(0.0, 1000000));
  CHECK(std::abs(std::abs(r.estimate.value) - 2 * std::sqrt(2.0)) < 4 * r.estimate.std_error);
  CHECK(r.outside_fraction > 0.0);
  CHECK(r.tally.n == 1000000);

  RunConfig ind = config(0.0, 1000000);
  ind.chsh_estimator = ChshEstimator::Independent;
  r = estimate_chsh(kOptimal, ind);
  CHECK(std::abs(std::abs(r.estimate.value) - 2 * std::sqrt(2.0)) < 4 * r.estimate.std_error);

  // all angles zero: every trial gives S_A * (3 S_B - S_B) with S_B = -S_A
  r = estimate_chsh({Angle(0.0), Angle(0.0), Angle(0.0)}, config(0.0, 10000));
  CHECK(r.estimate.value == -2.0);
  CHECK(std::abs(r.estimate.value) == doctest::Approx(chsh_value({Angle(0.0), Angle(0.0), Angle(0.0)})));
  CHECK(r.tally.histogram[1] == 10000);

  // intermediate setting
  const ChshSetting mid{Angle(1.0), Angle(0.3), Angle(-0.6)};
  r = estimate_chsh(mid, config(0.0, 1000000));
  CHECK(std::abs(std::abs(r.estimate.value) - chsh_value(mid)) < 4 * r.estimate.std_error);
}

TEST_CASE("Weihs-Zeilinger with single choices reduces to a plain run") {
  WZOptions o;
  o.alpha_choices = {Angle(0.0)};
  o.beta_choices = {Angle(0.0)};
  const RunConfig c = config(1.2, 100000);
  const auto r = run_weihs_zeilinger(o, c);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].tally == merge_tallies(run_pair_streams(c)));
  CHECK_FALSE(r.chsh_available);
}

TEST_CASE("Weihs-Zeilinger optimal choices violate CHSH") {
  WZOptions o;
  o.alpha_choices = {Angle(0.0), Angle(kPi / 2)};
  o.beta_choices = {Angle(kPi / 4), Angle(-kPi / 4)};
  o.keep_records = true;
  const auto r = run_weihs_zeilinger(o, config(0.0, 1000000));
  REQUIRE(r.chsh_available);
  CHECK(std::abs(r.chsh.value - 2 * std::sqrt(2.0)) < 4 * r.chsh.std_error);
  CHECK(r.records.size() == 1000000);
  std::uint64_t total = 0;
  for (const auto& cell : r.cells) {
    total += cell.tally.total();
    CHECK(std::abs(static_cast<double>(cell.tally.total()) / 1e6 - 0.25) < 4 * std::sqrt(0.25 * 0.75 / 1e6));
  }
  CHECK(total == 1000000);
}
