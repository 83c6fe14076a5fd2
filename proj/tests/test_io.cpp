#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "clockmem/io.hpp"
#include "doctest.h"

using namespace clockmem;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("doubles round-trip through 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, 0.71, 2.0, 1e300, 5e-324, 0.0, 12345.6789}) {
    // strtod, not std::stod: the latter throws out_of_range on subnormals
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("shortest formatting is round-trip and tidy") {
  CHECK(format_shortest(4.0 / 25.0) == "0.16");
  CHECK(format_shortest(2.0) == "2");
  CHECK(format_shortest(0.5) == "0.5");
  for (double v : {0.1, 1.0 / 3.0, 0.71, 1e300}) {
    CHECK(std::stod(format_shortest(v)) == v);
  }
}

TEST_CASE("q labels") {
  ModelParams p{.L = 4, .q = 6};
  CHECK(q_label(p) == "6");
  ModelParams xy{.L = 4, .q = kContinuousQ};
  CHECK(q_label(xy) == "xy");
  CHECK(parse_q("6") == 6);
  CHECK(parse_q("xy") == kContinuousQ);
  CHECK(parse_q("inf") == kContinuousQ);
  CHECK_THROWS_AS(parse_q("6b"), std::invalid_argument);
}

TEST_CASE("stop kind names") {
  CHECK(parse_stop_kind("plurality") == StopKind::PLURALITY_LOSS);
  CHECK(parse_stop_kind("aggregate") == StopKind::AGGREGATE_LOSS);
  CHECK(std::string(stop_kind_name(StopKind::PLURALITY_LOSS)) == "plurality");
  CHECK_THROWS_AS(parse_stop_kind("never"), std::invalid_argument);
}

TEST_CASE("records survive a CSV round trip") {
  std::vector<MemoryTimeRecord> records;
  MemoryTimeRecord a;
  a.params = ModelParams{.L = 16, .q = 6, .T = 0.71};
  a.realization_index = 3;
  a.tau_mcs = 912;
  a.accepts = 1234;
  a.attempts = 233472;
  records.push_back(a);
  MemoryTimeRecord b;
  b.params = ModelParams{.L = 24, .q = kContinuousQ, .T = 0.8, .q_bin = 6};
  b.realization_index = 7;
  b.tau_mcs = 100;
  b.censored = true;
  records.push_back(b);

  const auto path = temp_path("clockmem_records_rt.csv");
  write_records_csv(path, records);
  const auto back = read_records_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].params.q == 6);
  CHECK(back[0].params.L == 16);
  CHECK(back[0].params.T == 0.71);
  CHECK(back[0].realization_index == 3);
  CHECK(back[0].tau_mcs == 912);
  CHECK_FALSE(back[0].censored);
  CHECK(back[0].accepts == 1234);
  CHECK(back[0].attempts == 233472);
  CHECK(back[1].params.q == kContinuousQ);
  CHECK(back[1].params.q_bin == 6);
  CHECK(back[1].censored);
  std::remove(path.c_str());
}

TEST_CASE("records reader rejects malformed input") {
  const auto path = temp_path("clockmem_records_bad.csv");
  {
    std::ofstream out(path);
    out << "q,T\n2,1.0\n";
  }
  CHECK_THROWS(read_records_csv(path));
  CHECK_THROWS(read_records_csv(temp_path("clockmem_no_such_file.csv")));
  std::remove(path.c_str());
}

TEST_CASE("trajectory CSV lists counts per species") {
  Trajectory traj;
  traj.params = ModelParams{.L = 3, .q = 3};
  ObservableSample s;
  s.t = 0;
  s.m = 1.0;
  s.theta = 0.0;
  s.energy_per_site = -2.0;
  s.counts = {9, 0, 0};
  traj.samples.push_back(s);
  s.t = 10;
  s.counts = {5, 3, 1};
  traj.samples.push_back(s);

  const auto path = temp_path("clockmem_traj.csv");
  write_trajectory_csv(path, traj);
  const auto text = slurp(path);
  CHECK(text.find("t,m,theta,energy_per_site,count_0,count_1,count_2\n") == 0);
  CHECK(text.find("\n10,") != std::string::npos);
  CHECK(text.find(",5,3,1\n") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("summary and fit documents carry stable keys") {
  EnsembleSummary sum;
  sum.params = ModelParams{.L = 16, .q = 6, .T = 0.71};
  sum.stop = {};
  sum.n_realizations = 10;
  sum.mean_tau = 20.0;
  sum.stderr_tau = 2.0;
  sum.master_seed = 42;
  const auto j = summary_to_json(sum);
  CHECK(j["params"]["q"] == 6);
  CHECK(j["stop_rule"] == "plurality");
  CHECK(j["reliable"] == true);
  CHECK(j["mean_tau_mcs"] == 20.0);
  CHECK(j["mean_tau_seconds"] == doctest::Approx(2e-11));
  CHECK(j["code_version"] == kCodeVersion);

  std::vector<ScalingPoint> pts;
  for (double L : {8, 16, 32}) {
    ScalingPoint p;
    p.L = L;
    p.mean_tau = 3 * L * L;
    p.n = 1;
    pts.push_back(p);
  }
  const auto fit = fit_power_law(pts);
  const auto fj = fit_to_json(pts, fit, GrowthClass::POLYNOMIAL_CONSISTENT, 0.3);
  CHECK(fj["z"] == doctest::Approx(2.0));
  CHECK(fj["amplitude"] == doctest::Approx(3.0));
  CHECK(fj["growth_class"] == "POLYNOMIAL-CONSISTENT");
  CHECK(fj["points"].size() == 3);
}
