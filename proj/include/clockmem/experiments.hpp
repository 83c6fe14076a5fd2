#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clockmem/lattice.hpp"
#include "clockmem/observables.hpp"
#include "clockmem/params.hpp"

namespace clockmem {

enum class StopKind {
  PLURALITY_LOSS,  // some s != 0 strictly exceeds s = 0 in count
  AGGREGATE_LOSS,  // all s != 0 together strictly exceed s = 0
};

struct StopRule {
  StopKind kind = StopKind::PLURALITY_LOSS;
  uint64_t check_interval = 1;  // MCS between evaluations
};

bool stop_satisfied(const std::vector<int64_t>& census, StopKind kind);

struct MemoryTimeRecord {
  ModelParams params;
  uint64_t realization_index = 0;
  uint64_t tau_mcs = 0;     // first checked time at which the rule held
  bool censored = false;    // max_steps reached without loss; tau_mcs = max_steps
  uint64_t accepts = 0;
  uint64_t attempts = 0;
};

struct EnsembleSummary {
  ModelParams params;
  StopRule stop;
  uint64_t n_realizations = 0;
  uint64_t n_censored = 0;   // > 0 marks the summary unreliable
  double mean_tau = 0.0;     // over uncensored records only
  double stderr_tau = 0.0;
  uint64_t master_seed = 0;
};

// Fully polarized start (species 0; for XY the bin-0 center angle pi/q_bin,
// see the note in experiments.cpp), Metropolis sweeps, stop rule evaluated
// at t = 0 and then every check_interval MCS. Realization streams are keyed
// by (master_seed, realization_index) only, so records never depend on
// scheduling.
MemoryTimeRecord memory_time_single(const ModelParams& params,
                                    uint64_t realization_index,
                                    uint64_t master_seed, StopRule stop,
                                    uint64_t max_steps);

// Mean/stderr over the uncensored records; censored records only bump
// n_censored, which marks the whole summary unreliable.
EnsembleSummary summarize_records(const ModelParams& params, StopRule stop,
                                  uint64_t master_seed,
                                  const std::vector<MemoryTimeRecord>& records);

// Runs realizations 0..n-1 across `parallelism` threads; the record list is
// ordered by realization index and identical for every parallelism degree.
std::pair<EnsembleSummary, std::vector<MemoryTimeRecord>> run_ensemble(
    const ModelParams& params, uint64_t n_realizations, uint64_t master_seed,
    StopRule stop, uint64_t max_steps, int parallelism);

// Evolves from `start`, recording a sample every sampling_interval MCS,
// including t = 0. Stream identity (master_seed, 0).
Trajectory record_precession(const ModelParams& params, uint64_t master_seed,
                             uint64_t duration, uint64_t sampling_interval,
                             const FillSpec& start);

// How the exact oracle treats the stop rule:
//  PER_ATTEMPT - absorb the instant the rule holds (single-attempt kernel
//                with absorbing stop states; expectation in attempts / L^2);
//  PER_SWEEP   - absorb only at check instants spaced check_interval MCS,
//                exactly like memory_time_single's cadence.
enum class OracleCadence { PER_ATTEMPT, PER_SWEEP };

// Expected memory time in MCS for the polarized start, from the exact
// Metropolis transition matrix over all q^(L^2) states. Requires
// q^(L^2) <= 1e6 for PER_ATTEMPT and <= 4096 for PER_SWEEP (dense powers).
// Returns 0 when the start state already satisfies the rule.
double exact_hitting_time_oracle(const ModelParams& params, StopRule stop,
                                 OracleCadence cadence);

// The polarized starting fill used by the memory-time protocol.
FillSpec memory_start_fill(const ModelParams& params);

}  // namespace clockmem
