#include <algorithm>
#include <cmath>
#include <limits>

#include "clockmem/experiments.hpp"
#include "clockmem/metropolis.hpp"
#include "clockmem/rng.hpp"
#include "doctest.h"

using namespace clockmem;

TEST_CASE("stop rules read the census") {
  CHECK_FALSE(stop_satisfied({9, 0, 0}, StopKind::PLURALITY_LOSS));
  CHECK_FALSE(stop_satisfied({4, 4, 1}, StopKind::PLURALITY_LOSS));  // tie is no loss
  CHECK(stop_satisfied({4, 5, 0}, StopKind::PLURALITY_LOSS));
  CHECK_FALSE(stop_satisfied({9, 0, 0}, StopKind::AGGREGATE_LOSS));
  CHECK(stop_satisfied({4, 3, 2}, StopKind::AGGREGATE_LOSS));
  CHECK_FALSE(stop_satisfied({5, 2, 2}, StopKind::AGGREGATE_LOSS));  // tie again
}

TEST_CASE("aggregate loss never fires after plurality loss") {
  // wherever both fire, t_aggregate <= t_plurality
  ModelParams p{.L = 8, .q = 4, .T = 1.1};
  for (uint64_t idx = 0; idx < 10; ++idx) {
    RngStream rng(31, idx);
    auto lat = build_lattice(p, memory_start_fill(p));
    SweepClock clock;
    uint64_t t_plu = 0, t_agg = 0;
    while ((t_plu == 0 || t_agg == 0) && clock.mcs < 100000) {
      sweep(lat, rng, clock);
      if (t_agg == 0 && stop_satisfied(lat.census(), StopKind::AGGREGATE_LOSS))
        t_agg = clock.mcs;
      if (t_plu == 0 && stop_satisfied(lat.census(), StopKind::PLURALITY_LOSS))
        t_plu = clock.mcs;
    }
    REQUIRE(t_plu > 0);
    REQUIRE(t_agg > 0);
    CHECK(t_agg <= t_plu);
  }
}

TEST_CASE("frozen dynamics censor") {
  ModelParams p{.L = 4, .q = 6, .T = 0.0};
  const auto rec = memory_time_single(p, 0, 5, {}, 100);
  CHECK(rec.censored);
  CHECK(rec.tau_mcs == 100);
  CHECK(rec.accepts == 0);
}

TEST_CASE("records are reproducible and stream-isolated") {
  ModelParams p{.L = 8, .q = 6, .T = 0.71};
  const auto a = memory_time_single(p, 17, 42, {}, 1000000);
  const auto b = memory_time_single(p, 17, 42, {}, 1000000);
  CHECK(a.tau_mcs == b.tau_mcs);
  CHECK(a.accepts == b.accepts);
  CHECK(a.attempts == b.attempts);
  CHECK_FALSE(a.censored);

  // the same record appears inside an ensemble, whatever else runs
  const auto [sum, records] = run_ensemble(p, 20, 42, {}, 1000000, 1);
  CHECK(records[17].tau_mcs == a.tau_mcs);
  CHECK(records[17].accepts == a.accepts);
  (void)sum;
}

TEST_CASE("summary statistics formula") {
  ModelParams p{.L = 8, .q = 2, .T = 1.0};
  std::vector<MemoryTimeRecord> records(3);
  records[0].tau_mcs = 10;
  records[1].tau_mcs = 20;
  records[2].tau_mcs = 30;
  const auto sum = summarize_records(p, {}, 7, records);
  CHECK(sum.mean_tau == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(sum.stderr_tau == doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(sum.n_censored == 0);

  records[1].censored = true;
  const auto poisoned = summarize_records(p, {}, 7, records);
  CHECK(poisoned.n_censored == 1);
  CHECK(poisoned.mean_tau == doctest::Approx(20.0));  // over the other two
}

TEST_CASE("parallelism does not change the records") {
  ModelParams p{.L = 8, .q = 3, .T = 1.6};  // disordered: fast, uncensored
  const auto [s1, r1] = run_ensemble(p, 32, 9, {}, 1000000, 1);
  const auto [s8, r8] = run_ensemble(p, 32, 9, {}, 1000000, 8);
  REQUIRE(r1.size() == r8.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].realization_index == r8[i].realization_index);
    CHECK(r1[i].tau_mcs == r8[i].tau_mcs);
    CHECK(r1[i].censored == r8[i].censored);
    CHECK(r1[i].accepts == r8[i].accepts);
    CHECK(r1[i].attempts == r8[i].attempts);
  }
  CHECK(s1.mean_tau == s8.mean_tau);
  CHECK(s1.stderr_tau == s8.stderr_tau);
}

TEST_CASE("mean memory time decreases with temperature") {
  ModelParams p{.L = 8, .q = 6};
  double last = std::numeric_limits<double>::infinity();
  for (double T : {0.6, 0.9, 1.3}) {
    ModelParams pt = p;
    pt.T = T;
    const auto [sum, recs] = run_ensemble(pt, 64, 123, {}, 1000000, 1);
    CHECK(sum.n_censored == 0);
    CHECK(sum.mean_tau < last);
    last = sum.mean_tau;
  }
}

TEST_CASE("precession sampling grid") {
  ModelParams p{.L = 6, .q = 6, .T = 0.8};
  const auto traj = record_precession(p, 4, 100, 10, FillSpec::polarized(0));
  REQUIRE(traj.samples.size() == 11);
  for (size_t i = 0; i < traj.samples.size(); ++i)
    CHECK(traj.samples[i].t == 10 * i);

  ModelParams frozen{.L = 6, .q = 6, .T = 0.0};
  const auto cold = record_precession(frozen, 4, 50, 5, FillSpec::polarized(0));
  for (const auto& s : cold.samples) {
    CHECK(s.m == 1.0);
    CHECK(s.theta == 0.0);
  }

  CHECK_THROWS_AS(record_precession(p, 4, 5, 10, FillSpec::polarized(0)),
                  std::invalid_argument);
}

// Golden oracle values, frozen after computing the same quantities with an
// independent dense linear-algebra implementation of the chain.
TEST_CASE("exact oracle: birth-death recurrence at T=inf") {
  ModelParams p{.L = 2, .q = 2, .T = std::numeric_limits<double>::infinity()};
  const double tau = exact_hitting_time_oracle(p, {}, OracleCadence::PER_ATTEMPT);
  CHECK(tau == doctest::Approx(19.0 / 12.0).epsilon(1e-10));
}

TEST_CASE("exact oracle: q=2 L=3 T=4 golden values") {
  ModelParams p{.L = 3, .q = 2, .T = 4.0};
  const double attempt =
      exact_hitting_time_oracle(p, {}, OracleCadence::PER_ATTEMPT);
  const double sweep = exact_hitting_time_oracle(p, {}, OracleCadence::PER_SWEEP);
  CHECK(attempt == doctest::Approx(5.0835206333601423).epsilon(1e-9));
  CHECK(sweep == doctest::Approx(7.1206195572967195).epsilon(1e-9));
  // the sweep cadence can only delay the stop
  CHECK(sweep > attempt);

  // q=2 has a single rival species: both rules coincide
  StopRule agg{StopKind::AGGREGATE_LOSS, 1};
  CHECK(exact_hitting_time_oracle(p, agg, OracleCadence::PER_SWEEP) ==
        doctest::Approx(sweep).epsilon(1e-12));
}

TEST_CASE("exact oracle rejects bad inputs") {
  ModelParams xy{.L = 2, .q = kContinuousQ, .T = 1.0};
  CHECK_THROWS_AS(exact_hitting_time_oracle(xy, {}, OracleCadence::PER_ATTEMPT),
                  std::invalid_argument);
  ModelParams cold{.L = 3, .q = 2, .T = 0.0};
  CHECK_THROWS_AS(exact_hitting_time_oracle(cold, {}, OracleCadence::PER_ATTEMPT),
                  std::invalid_argument);
  ModelParams huge{.L = 5, .q = 6, .T = 1.0};
  CHECK_THROWS_AS(exact_hitting_time_oracle(huge, {}, OracleCadence::PER_ATTEMPT),
                  std::invalid_argument);
}

TEST_CASE("simulation agrees with the sweep-cadence oracle") {
  ModelParams p{.L = 3, .q = 2, .T = 4.0};
  const double oracle = exact_hitting_time_oracle(p, {}, OracleCadence::PER_SWEEP);
  const auto [sum, recs] = run_ensemble(p, 10000, 42, {}, 1000000, 1);
  REQUIRE(sum.n_censored == 0);
  CHECK(std::abs(sum.mean_tau - oracle) < 3.0 * sum.stderr_tau);
}

TEST_CASE("xy memory run starts at the bin-0 center") {
  ModelParams p{.L = 6, .q = kContinuousQ, .T = 0.5, .q_bin = 6};
  auto lat = build_lattice(p, memory_start_fill(p));
  CHECK(lat.census()[0] == 36);
  for (int i = 0; i < 36; ++i)
    CHECK(lat.angle(i) == doctest::Approx(kTwoPi / 12).epsilon(1e-12));
}
