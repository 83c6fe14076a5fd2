// clockmem: memory-time experiments for the 2D q-state clock / XY model.
//
// Exit codes: 0 ok, 2 bad configuration, 3 runtime failure,
//             4 result unreliable (censored records present).

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "clockmem/clusters.hpp"
#include "clockmem/experiments.hpp"
#include "clockmem/fitting.hpp"
#include "clockmem/io.hpp"
#include "clockmem/rng.hpp"

using namespace clockmem;

namespace {

struct CommonOpts {
  std::string q_text = "2";
  int q_bin = 6;
  int L = 16;
  double T = 1.0;
  uint64_t master_seed = 0;

  ModelParams params() const {
    ModelParams p;
    p.q = parse_q(q_text);
    p.q_bin = q_bin;
    p.L = L;
    p.T = T;
    p.validate();
    return p;
  }
};

void add_model_flags(CLI::App* cmd, CommonOpts& o, bool with_L = true) {
  cmd->add_option("--q", o.q_text, "cardinality q (integer >= 2, or 'inf'/'xy')")
      ->required();
  cmd->add_option("--q-bin", o.q_bin, "census bins for the XY model")
      ->capture_default_str();
  if (with_L) cmd->add_option("--L", o.L, "lattice edge")->capture_default_str();
  cmd->add_option("--T", o.T, "temperature")->capture_default_str();
  cmd->add_option("--master-seed", o.master_seed, "stream master seed")
      ->capture_default_str();
}

Json meta_common(const std::string& subcommand, const CommonOpts& o) {
  Json j;
  j["subcommand"] = subcommand;
  j["q"] = o.q_text == "inf" ? "xy" : o.q_text;
  j["q_bin"] = o.q_bin;
  j["L"] = o.L;
  j["T"] = o.T;
  j["master_seed"] = o.master_seed;
  j["code_version"] = kCodeVersion;
  return j;
}

int default_parallelism() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------- memory
int cmd_memory(const CommonOpts& o, uint64_t n, uint64_t max_steps,
               const std::string& stop_name, uint64_t check_interval,
               int parallelism, const std::string& records_path,
               const std::string& summary_path) {
  const auto params = o.params();
  StopRule stop{parse_stop_kind(stop_name), check_interval};
  auto [summary, records] =
      run_ensemble(params, n, o.master_seed, stop, max_steps, parallelism);

  write_records_csv(records_path, records);
  write_json(summary_path, summary_to_json(summary));

  Json meta = meta_common("memory", o);
  meta["realizations"] = n;
  meta["max_steps"] = max_steps;
  meta["stop"] = stop_name;
  meta["check_interval"] = check_interval;
  meta["records"] = records_path;
  meta["summary"] = summary_path;
  write_json(records_path + ".meta.json", meta);

  std::printf("n=%llu censored=%llu mean_tau=%s MCS stderr=%s (%s s)\n",
              static_cast<unsigned long long>(summary.n_realizations),
              static_cast<unsigned long long>(summary.n_censored),
              format_shortest(summary.mean_tau).c_str(),
              format_shortest(summary.stderr_tau).c_str(),
              format_shortest(mcs_to_seconds(summary.mean_tau)).c_str());
  if (summary.n_censored > 0) {
    std::fprintf(stderr, "warning: %llu censored records; summary unreliable\n",
                 static_cast<unsigned long long>(summary.n_censored));
    return 4;
  }
  return 0;
}

// --------------------------------------------------------------------- precess
int cmd_precess(const CommonOpts& o, uint64_t duration, uint64_t interval,
                const std::string& start_name, const std::string& out_path) {
  const auto params = o.params();
  RngStream init_stream(o.master_seed, 1);  // dynamics stream has index 0
  FillSpec start = memory_start_fill(params);
  if (start_name == "random") start = FillSpec::uniform_random(init_stream);
  else if (start_name != "polarized")
    throw CLI::ValidationError("--start", "expected 'polarized' or 'random'");

  const auto traj =
      record_precession(params, o.master_seed, duration, interval, start);
  write_trajectory_csv(out_path, traj);

  Json meta = meta_common("precess", o);
  meta["duration"] = duration;
  meta["interval"] = interval;
  meta["start"] = start_name;
  meta["out"] = out_path;
  write_json(out_path + ".meta.json", meta);

  int sectors = 0;
  {
    std::vector<bool> seen(params.species_count(), false);
    for (const auto& s : traj.samples) {
      const int sec = static_cast<int>(
          effective_sector(s.theta, params.species_count()));
      if (!seen[sec]) {
        seen[sec] = true;
        ++sectors;
      }
    }
  }
  double mbar = 0.0;
  for (const auto& s : traj.samples) mbar += s.m;
  mbar /= traj.samples.size();
  std::printf("samples=%zu sectors_visited=%d mean_m=%s\n", traj.samples.size(),
              sectors, format_shortest(mbar).c_str());
  return 0;
}

// -------------------------------------------------------------------- clusters
int cmd_clusters(const CommonOpts& o, const std::vector<int>& L_list,
                 int n_samples, const std::string& out_path,
                 const std::string& stats_path) {
  const auto params = o.params();
  const auto scan = largest_island_scan(params, L_list, n_samples, o.master_seed);
  write_islands_csv(out_path, scan, params);

  Json stats = Json::array();
  for (const auto& row : scan.per_L) {
    Json r;
    r["L"] = row.L;
    r["mean_largest_0"] = row.mean_largest_0;
    r["mean_largest_non0"] = row.mean_largest_non0;
    r["quantiles_largest_0"] = row.q_largest_0;
    r["quantiles_largest_non0"] = row.q_largest_non0;
    r["plurality_0_fraction"] = row.plurality_0_fraction;
    stats.push_back(r);
    std::printf("L=%d largest_0=%s largest_non0=%s plurality_0=%s\n", row.L,
                format_shortest(row.mean_largest_0).c_str(),
                format_shortest(row.mean_largest_non0).c_str(),
                format_shortest(row.plurality_0_fraction).c_str());
  }
  Json meta = meta_common("clusters", o);
  meta["L_list"] = L_list;
  meta["samples"] = n_samples;
  meta["burn_in_mcs"] = "20*L^2";
  meta["sample_spacing_mcs"] = "L^2";
  meta["out"] = out_path;
  meta["per_L"] = stats;
  write_json(stats_path.empty() ? out_path + ".meta.json" : stats_path, meta);
  if (!stats_path.empty()) write_json(out_path + ".meta.json", meta);
  return 0;
}

// ------------------------------------------------------------------------- fit
int cmd_fit(const std::vector<std::string>& in_paths,
            const std::string& group_spec, double margin, bool use_median,
            const std::string& out_path) {
  std::vector<MemoryTimeRecord> records;
  for (const auto& path : in_paths) {
    auto part = read_records_csv(path);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  if (records.empty())
    throw std::runtime_error("no records in the given --in files");

  std::vector<std::string> group_cols;
  {
    std::string cur;
    for (char c : group_spec + ",") {
      if (c == ',') {
        if (!cur.empty()) group_cols.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    for (const auto& g : group_cols)
      if (g != "q" && g != "T" && g != "q_bin")
        throw CLI::ValidationError("--group", "allowed columns: q, T, q_bin");
  }

  auto group_key = [&](const MemoryTimeRecord& r) {
    std::string key;
    for (const auto& g : group_cols) {
      if (g == "q") key += "q=" + q_label(r.params) + " ";
      if (g == "T") key += "T=" + format_shortest(r.params.T) + " ";
      if (g == "q_bin") key += "q_bin=" + std::to_string(r.params.q_bin) + " ";
    }
    if (!key.empty()) key.pop_back();
    return key;
  };

  std::map<std::string, std::map<int, std::vector<const MemoryTimeRecord*>>> groups;
  for (const auto& r : records) groups[group_key(r)][r.params.L].push_back(&r);

  Json out;
  out["input"] = in_paths;
  out["group_by"] = group_cols;
  out["estimator"] = use_median ? "median" : "mean";
  out["groups"] = Json::array();
  bool any_censored = false;

  for (const auto& [key, by_L] : groups) {
    std::vector<ScalingPoint> points;
    bool censored = false;
    for (const auto& [L, rows] : by_L) {
      ScalingPoint pt;
      pt.L = L;
      std::vector<double> taus;
      for (const auto* r : rows) {
        if (r->censored) censored = true;
        taus.push_back(static_cast<double>(r->tau_mcs));
      }
      pt.n = taus.size();
      double mean = 0.0;
      for (double t : taus) mean += t;
      mean /= taus.size();
      double var = 0.0;
      for (double t : taus) var += (t - mean) * (t - mean);
      pt.stderr_tau =
          taus.size() > 1 ? std::sqrt(var / (taus.size() - 1) / taus.size()) : 0.0;
      if (use_median) {
        std::sort(taus.begin(), taus.end());
        const size_t h = taus.size() / 2;
        mean = taus.size() % 2 ? taus[h] : 0.5 * (taus[h - 1] + taus[h]);
        pt.stderr_tau *= 1.2533;  // asymptotic efficiency of the median
      }
      pt.mean_tau = mean;
      points.push_back(pt);
    }

    Json g;
    g["group"] = key;
    if (censored) {
      any_censored = true;
      g["error"] = "censored records present; no fit";
      std::fprintf(stderr, "group %s: censored records present, skipping\n",
                   key.c_str());
      out["groups"].push_back(g);
      continue;
    }
    const auto fit = fit_power_law(points);
    GrowthClass growth = GrowthClass::UNDETERMINED;
    if (points.size() >= 4) growth = growth_classifier(points, margin);
    g["fit"] = fit_to_json(points, fit, growth, margin);
    out["groups"].push_back(g);
    std::printf("%s: z=%s +/- %s r2=%s %s\n", key.c_str(),
                format_shortest(fit.z).c_str(), format_shortest(fit.z_err).c_str(),
                format_shortest(fit.r_squared).c_str(),
                points.size() >= 4 ? growth_class_name(growth) : "(too few L for class)");
  }
  out["code_version"] = kCodeVersion;
  if (!out_path.empty()) write_json(out_path, out);
  return any_censored ? 4 : 0;
}

// ---------------------------------------------------------------------- oracle
int cmd_oracle(const CommonOpts& o, const std::string& stop_name,
               uint64_t check_interval, const std::string& cadence_name,
               const std::string& out_path) {
  const auto params = o.params();
  StopRule stop{parse_stop_kind(stop_name), check_interval};
  OracleCadence cadence;
  if (cadence_name == "attempt") cadence = OracleCadence::PER_ATTEMPT;
  else if (cadence_name == "sweep") cadence = OracleCadence::PER_SWEEP;
  else throw CLI::ValidationError("--cadence", "expected 'attempt' or 'sweep'");

  const double tau = exact_hitting_time_oracle(params, stop, cadence);
  std::printf("%s\n", format_shortest(tau).c_str());
  if (!out_path.empty()) {
    Json meta = meta_common("oracle", o);
    meta["stop"] = stop_name;
    meta["check_interval"] = check_interval;
    meta["cadence"] = cadence_name;
    meta["expected_tau_mcs"] = tau;
    write_json(out_path, meta);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory time of the polarized state in the 2D clock / XY model"};
  app.require_subcommand(1);

  // memory
  CommonOpts mem_o;
  uint64_t mem_n = 100, mem_max_steps = 100000000ull, mem_interval = 1;
  std::string mem_stop = "plurality";
  int mem_par = default_parallelism();
  std::string mem_records = "memory_records.csv";
  std::string mem_summary = "memory_summary.json";
  auto* mem = app.add_subcommand("memory", "run a memory-time ensemble");
  add_model_flags(mem, mem_o);
  mem->add_option("--realizations", mem_n, "ensemble size")->capture_default_str();
  mem->add_option("--max-steps", mem_max_steps, "censoring horizon in MCS")
      ->capture_default_str();
  mem->add_option("--stop", mem_stop, "stop rule: plurality | aggregate")
      ->capture_default_str();
  mem->add_option("--check-interval", mem_interval, "MCS between stop checks")
      ->capture_default_str();
  mem->add_option("--parallelism", mem_par, "worker threads")->capture_default_str();
  mem->add_option("--records", mem_records, "records CSV path")->capture_default_str();
  mem->add_option("--summary", mem_summary, "summary JSON path")->capture_default_str();

  // precess
  CommonOpts pre_o;
  uint64_t pre_duration = 1000000, pre_interval = 100;
  std::string pre_start = "polarized", pre_out = "trajectory.csv";
  auto* pre = app.add_subcommand("precess", "record magnetization precession");
  add_model_flags(pre, pre_o);
  pre->add_option("--duration", pre_duration, "run length in MCS")->capture_default_str();
  pre->add_option("--interval", pre_interval, "MCS between samples")->capture_default_str();
  pre->add_option("--start", pre_start, "polarized | random")->capture_default_str();
  pre->add_option("--out", pre_out, "trajectory CSV path")->capture_default_str();

  // clusters
  CommonOpts clu_o;
  std::vector<int> clu_L = {16, 32, 64};
  int clu_samples = 50;
  std::string clu_out = "islands.csv", clu_stats;
  auto* clu = app.add_subcommand("clusters", "equilibrium largest-island scan");
  add_model_flags(clu, clu_o, /*with_L=*/false);
  clu->add_option("--L-list", clu_L, "lattice edges")->delimiter(',')->capture_default_str();
  clu->add_option("--samples", clu_samples, "snapshots per L")->capture_default_str();
  clu->add_option("--out", clu_out, "per-sample CSV path")->capture_default_str();
  clu->add_option("--stats", clu_stats, "per-L stats JSON path (default <out>.meta.json)");

  // fit
  std::vector<std::string> fit_in;
  std::string fit_group = "q,T", fit_out;
  double fit_margin = 0.3;
  bool fit_median = false;
  auto* fit = app.add_subcommand("fit", "power-law fit over grouped records");
  fit->add_option("--in", fit_in, "records CSV (repeatable)")->required();
  fit->add_option("--group", fit_group, "grouping columns")->capture_default_str();
  fit->add_option("--margin", fit_margin, "growth-classifier slope margin")
      ->capture_default_str();
  fit->add_flag("--median", fit_median, "fit medians instead of means");
  fit->add_option("--out", fit_out, "fit JSON path");

  // oracle
  CommonOpts ora_o;
  ora_o.L = 3;
  std::string ora_stop = "plurality", ora_cadence = "sweep", ora_out;
  uint64_t ora_interval = 1;
  auto* ora = app.add_subcommand("oracle", "exact expected memory time (tiny systems)");
  add_model_flags(ora, ora_o);
  ora->add_option("--stop", ora_stop, "stop rule: plurality | aggregate")
      ->capture_default_str();
  ora->add_option("--check-interval", ora_interval, "MCS between stop checks")
      ->capture_default_str();
  ora->add_option("--cadence", ora_cadence,
                  "absorb per 'attempt' or at 'sweep' checks like the simulation")
      ->capture_default_str();
  ora->add_option("--out", ora_out, "metadata JSON path");

  // tp
  std::string tp_q;
  auto* tp = app.add_subcommand("tp", "Peierls droplet-percolation temperature 4/q^2");
  tp->add_option("--q", tp_q, "cardinality (finite)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (mem->parsed())
      return cmd_memory(mem_o, mem_n, mem_max_steps, mem_stop, mem_interval,
                        mem_par, mem_records, mem_summary);
    if (pre->parsed())
      return cmd_precess(pre_o, pre_duration, pre_interval, pre_start, pre_out);
    if (clu->parsed())
      return cmd_clusters(clu_o, clu_L, clu_samples, clu_out, clu_stats);
    if (fit->parsed())
      return cmd_fit(fit_in, fit_group, fit_margin, fit_median, fit_out);
    if (ora->parsed())
      return cmd_oracle(ora_o, ora_stop, ora_interval, ora_cadence, ora_out);
    if (tp->parsed()) {
      std::printf("%s\n",
                  format_shortest(peierls_percolation_temperature(parse_q(tp_q)))
                      .c_str());
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
