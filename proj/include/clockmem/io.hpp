#pragma once

#include <string>
#include <vector>

#include "clockmem/clusters.hpp"
#include "clockmem/experiments.hpp"
#include "clockmem/fitting.hpp"
#include "clockmem/observables.hpp"

#include "json.hpp"

namespace clockmem {

inline constexpr const char* kCodeVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// All CSV output: comma separator, '.' decimal point, header row, doubles
// printed with 17 significant digits so values round-trip exactly.
std::string format_double(double v);
// Shortest representation that round-trips; for human-facing scalars.
std::string format_shortest(double v);

// The model cardinality as it appears in CSV/JSON: the integer q, or "xy".
std::string q_label(const ModelParams& params);
// Inverse of q_label; accepts an integer, "xy" or "inf".
int parse_q(const std::string& text);

// memory records: q,q_bin,L,T,realization_index,tau_mcs,censored,accepts,attempts
void write_records_csv(const std::string& path,
                       const std::vector<MemoryTimeRecord>& records);
std::vector<MemoryTimeRecord> read_records_csv(const std::string& path);

// trajectory: t,m,theta,energy_per_site,count_0,...
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// islands: L,T,q,sample_index,largest_0,largest_non0,n_clusters_0,wraps_x,wraps_y
void write_islands_csv(const std::string& path, const IslandScanResult& scan,
                       const ModelParams& params);

Json summary_to_json(const EnsembleSummary& summary);
Json fit_to_json(const std::vector<ScalingPoint>& points, const FitResult& fit,
                 GrowthClass growth, double margin);
void write_json(const std::string& path, const Json& doc);

const char* stop_kind_name(StopKind kind);
StopKind parse_stop_kind(const std::string& name);

}  // namespace clockmem
