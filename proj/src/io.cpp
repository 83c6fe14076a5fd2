#include "clockmem/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clockmem {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string q_label(const ModelParams& params) {
  return params.is_xy() ? "xy" : std::to_string(params.q);
}

int parse_q(const std::string& text) {
  if (text == "xy" || text == "inf" || text == "XY") return kContinuousQ;
  size_t pos = 0;
  const int q = std::stoi(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("parse_q: bad q '" + text + "'");
  return q;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<MemoryTimeRecord>& records) {
  auto out = open_out(path);
  out << "q,q_bin,L,T,realization_index,tau_mcs,censored,accepts,attempts\n";
  for (const auto& r : records) {
    out << q_label(r.params) << ',' << r.params.q_bin << ',' << r.params.L << ','
        << format_double(r.params.T) << ',' << r.realization_index << ','
        << r.tau_mcs << ',' << (r.censored ? 1 : 0) << ',' << r.accepts << ','
        << r.attempts << '\n';
  }
}

std::vector<MemoryTimeRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty records file: " + path);
  const auto header = split_csv(line);
  const std::vector<std::string> expected = {
      "q", "q_bin", "L", "T", "realization_index",
      "tau_mcs", "censored", "accepts", "attempts"};
  if (header != expected)
    throw std::runtime_error("unexpected records header in " + path);

  std::vector<MemoryTimeRecord> records;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != expected.size())
      throw std::runtime_error(path + ": wrong column count on line " +
                               std::to_string(lineno));
    MemoryTimeRecord r;
    r.params.q = parse_q(f[0]);
    r.params.q_bin = std::stoi(f[1]);
    r.params.L = std::stoi(f[2]);
    r.params.T = std::stod(f[3]);
    r.realization_index = std::stoull(f[4]);
    r.tau_mcs = std::stoull(f[5]);
    r.censored = f[6] != "0";
    r.accepts = std::stoull(f[7]);
    r.attempts = std::stoull(f[8]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  auto out = open_out(path);
  const size_t n_counts =
      trajectory.samples.empty() ? 0 : trajectory.samples.front().counts.size();
  out << "t,m,theta,energy_per_site";
  for (size_t s = 0; s < n_counts; ++s) out << ",count_" << s;
  out << '\n';
  for (const auto& s : trajectory.samples) {
    out << s.t << ',' << format_double(s.m) << ',' << format_double(s.theta)
        << ',' << format_double(s.energy_per_site);
    for (auto c : s.counts) out << ',' << c;
    out << '\n';
  }
}

void write_islands_csv(const std::string& path, const IslandScanResult& scan,
                       const ModelParams& params) {
  auto out = open_out(path);
  out << "L,T,q,sample_index,largest_0,largest_non0,n_clusters_0,wraps_x,wraps_y\n";
  for (const auto& s : scan.samples) {
    out << s.L << ',' << format_double(params.T) << ',' << q_label(params) << ','
        << s.sample_index << ',' << s.largest_0 << ',' << s.largest_non0 << ','
        << s.n_clusters_0 << ',' << (s.wraps_x ? 1 : 0) << ','
        << (s.wraps_y ? 1 : 0) << '\n';
  }
}

const char* stop_kind_name(StopKind kind) {
  return kind == StopKind::PLURALITY_LOSS ? "plurality" : "aggregate";
}

StopKind parse_stop_kind(const std::string& name) {
  if (name == "plurality") return StopKind::PLURALITY_LOSS;
  if (name == "aggregate") return StopKind::AGGREGATE_LOSS;
  throw std::invalid_argument("unknown stop rule: " + name);
}

namespace {

Json params_to_json(const ModelParams& p) {
  Json j;
  j["q"] = p.is_xy() ? Json("xy") : Json(p.q);
  j["q_bin"] = p.q_bin;
  j["L"] = p.L;
  j["T"] = p.T;
  return j;
}

}  // namespace

Json summary_to_json(const EnsembleSummary& summary) {
  Json j;
  j["params"] = params_to_json(summary.params);
  j["stop_rule"] = stop_kind_name(summary.stop.kind);
  j["check_interval_mcs"] = summary.stop.check_interval;
  j["n_realizations"] = summary.n_realizations;
  j["n_censored"] = summary.n_censored;
  j["reliable"] = summary.n_censored == 0;
  j["mean_tau_mcs"] = summary.mean_tau;
  j["stderr_tau_mcs"] = summary.stderr_tau;
  j["mean_tau_seconds"] = mcs_to_seconds(summary.mean_tau);
  j["master_seed"] = summary.master_seed;
  j["code_version"] = kCodeVersion;
  return j;
}

Json fit_to_json(const std::vector<ScalingPoint>& points, const FitResult& fit,
                 GrowthClass growth, double margin) {
  Json j;
  Json pts = Json::array();
  for (const auto& p : points) {
    Json e;
    e["L"] = p.L;
    e["mean_tau_mcs"] = p.mean_tau;
    e["stderr_tau_mcs"] = p.stderr_tau;
    e["n"] = p.n;
    pts.push_back(e);
  }
  j["points"] = pts;
  j["method"] = fit.weighted ? "weighted-least-squares" : "least-squares";
  j["z"] = fit.z;
  j["z_err"] = fit.z_err;
  j["log_amplitude"] = fit.log_amplitude;
  j["amplitude"] = std::exp(fit.log_amplitude);
  j["r_squared"] = fit.r_squared;
  j["local_slopes"] = fit.local_slopes;
  j["growth_margin"] = margin;
  j["growth_class"] = growth_class_name(growth);
  j["code_version"] = kCodeVersion;
  return j;
}

void write_json(const std::string& path, const Json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace clockmem
