#include "clockmem/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "clockmem/metropolis.hpp"
#include "clockmem/rng.hpp"

namespace clockmem {

bool stop_satisfied(const std::vector<int64_t>& census, StopKind kind) {
  if (kind == StopKind::PLURALITY_LOSS) {
    for (size_t s = 1; s < census.size(); ++s)
      if (census[s] > census[0]) return true;
    return false;
  }
  int64_t rest = 0;
  for (size_t s = 1; s < census.size(); ++s) rest += census[s];
  return rest > census[0];
}

FillSpec memory_start_fill(const ModelParams& params) {
  // Finite q starts in species 0. The XY run starts at the center of bin 0
  // (pi/q_bin): bin edges sit at multiples of 2*pi/q_bin, so a start at
  // theta = 0 would sit on the bin-0/bin-(q_bin-1) boundary and lose half
  // of its census to the lower bin after the first sweep's fluctuations.
  // The centered start is the geometric analog of the discrete case, where
  // species 0 lies a half-sector away from both neighboring sectors.
  if (params.is_xy())
    return FillSpec::polarized_angle(std::numbers::pi / params.q_bin);
  return FillSpec::polarized(0);
}

MemoryTimeRecord memory_time_single(const ModelParams& params,
                                    uint64_t realization_index,
                                    uint64_t master_seed, StopRule stop,
                                    uint64_t max_steps) {
  params.validate();
  if (max_steps < 1) throw std::invalid_argument("memory_time_single: max_steps < 1");
  if (stop.check_interval < 1)
    throw std::invalid_argument("memory_time_single: check_interval < 1");

  MemoryTimeRecord rec;
  rec.params = params;
  rec.realization_index = realization_index;

  RngStream rng(master_seed, realization_index);
  auto lat = build_lattice(params, memory_start_fill(params));
  if (stop_satisfied(lat.census(), stop.kind)) {
    rec.tau_mcs = 0;
    return rec;
  }

  SweepClock clock;
  while (clock.mcs < max_steps) {
    const uint64_t chunk =
        std::min<uint64_t>(stop.check_interval, max_steps - clock.mcs);
    for (uint64_t t = 0; t < chunk; ++t) sweep(lat, rng, clock);
    if (chunk == stop.check_interval && stop_satisfied(lat.census(), stop.kind)) {
      rec.tau_mcs = clock.mcs;
      rec.accepts = clock.accepts;
      rec.attempts = clock.attempts;
      return rec;
    }
  }
  rec.tau_mcs = max_steps;
  rec.censored = true;
  rec.accepts = clock.accepts;
  rec.attempts = clock.attempts;
  return rec;
}

std::pair<EnsembleSummary, std::vector<MemoryTimeRecord>> run_ensemble(
    const ModelParams& params, uint64_t n_realizations, uint64_t master_seed,
    StopRule stop, uint64_t max_steps, int parallelism) {
  params.validate();
  if (n_realizations < 1) throw std::invalid_argument("run_ensemble: n_realizations < 1");
  if (parallelism < 1) parallelism = 1;

  std::vector<MemoryTimeRecord> records(n_realizations);
  std::atomic<uint64_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const uint64_t i = next.fetch_add(1);
      if (i >= n_realizations || failed.load()) return;
      try {
        records[i] = memory_time_single(params, i, master_seed, stop, max_steps);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(
        std::min<uint64_t>(parallelism, n_realizations));
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);
  auto summary = summarize_records(params, stop, master_seed, records);
  return {summary, std::move(records)};
}

EnsembleSummary summarize_records(const ModelParams& params, StopRule stop,
                                  uint64_t master_seed,
                                  const std::vector<MemoryTimeRecord>& records) {
  EnsembleSummary sum;
  sum.params = params;
  sum.stop = stop;
  sum.n_realizations = records.size();
  sum.master_seed = master_seed;
  double mean = 0.0;
  uint64_t n_ok = 0;
  for (const auto& r : records) {
    if (r.censored) {
      ++sum.n_censored;
    } else {
      mean += static_cast<double>(r.tau_mcs);
      ++n_ok;
    }
  }
  if (n_ok > 0) mean /= n_ok;
  double var = 0.0;
  for (const auto& r : records) {
    if (r.censored) continue;
    const double d = static_cast<double>(r.tau_mcs) - mean;
    var += d * d;
  }
  sum.mean_tau = n_ok > 0 ? mean : 0.0;
  sum.stderr_tau = n_ok > 1 ? std::sqrt(var / (n_ok - 1) / n_ok) : 0.0;
  return sum;
}

Trajectory record_precession(const ModelParams& params, uint64_t master_seed,
                             uint64_t duration, uint64_t sampling_interval,
                             const FillSpec& start) {
  params.validate();
  if (sampling_interval < 1 || duration < sampling_interval)
    throw std::invalid_argument("record_precession: need duration >= interval >= 1");

  Trajectory traj;
  traj.params = params;
  traj.sampling_interval = sampling_interval;
  traj.master_seed = master_seed;
  traj.realization_index = 0;

  RngStream rng(master_seed, 0);
  auto lat = build_lattice(params, start);
  traj.samples.push_back(observe(lat, 0));
  SweepClock clock;
  while (clock.mcs + sampling_interval <= duration) {
    for (uint64_t t = 0; t < sampling_interval; ++t) sweep(lat, rng, clock);
    traj.samples.push_back(observe(lat, clock.mcs));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Exact hitting-time oracle over the full q^(L^2) state space.

namespace {

struct EnumeratedChain {
  int n_sites;
  int q;
  int64_t n_states;
  std::vector<double> cos_table;           // cos(2 pi d / q)
  std::vector<std::array<int32_t, 4>> nb;  // neighbor indices per site
  std::vector<int64_t> pow_q;              // q^i

  explicit EnumeratedChain(const ModelParams& p)
      : n_sites(p.n_sites()), q(p.q) {
    nb.reserve(n_sites);
    for (int i = 0; i < n_sites; ++i) nb.push_back(neighbor_indices(i, p.L));
    cos_table.resize(q);
    for (int d = 0; d < q; ++d) cos_table[d] = std::cos(kTwoPi * d / q);
    pow_q.assign(n_sites + 1, 1);
    for (int i = 0; i < n_sites; ++i) pow_q[i + 1] = pow_q[i] * q;
    n_states = pow_q[n_sites];
  }

  int digit(int64_t state, int site) const {
    return static_cast<int>(state / pow_q[site] % q);
  }

  bool absorbing(int64_t state, StopKind kind) const {
    std::vector<int64_t> census(q, 0);
    for (int i = 0; i < n_sites; ++i) ++census[digit(state, i)];
    return stop_satisfied(census, kind);
  }

  // Energy change of setting site i to s_new; same 4-slot convention as
  // SpinLattice::energy_delta (slots double up for L = 2).
  double energy_delta(int64_t state, int site, int s_new) const {
    const int s_old = digit(state, site);
    double d = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int sn = digit(state, nb[site][k]);
      d += cos_table[((s_old - sn) % q + q) % q] - cos_table[((s_new - sn) % q + q) % q];
    }
    return d;
  }

  // Accepted single-attempt moves out of `state`: (target state, probability).
  // The remaining mass stays put.
  void moves(int64_t state, double T,
             std::vector<std::pair<int64_t, double>>& out) const {
    out.clear();
    const double base = 1.0 / (static_cast<double>(n_sites) * (q - 1));
    for (int i = 0; i < n_sites; ++i) {
      const int s_old = digit(state, i);
      for (int s_new = 0; s_new < q; ++s_new) {
        if (s_new == s_old) continue;
        const double a = acceptance_probability(energy_delta(state, i, s_new), T);
        if (a <= 0.0) continue;
        out.emplace_back(state + (s_new - s_old) * pow_q[i], base * a);
      }
    }
  }
};

double oracle_per_attempt(const EnumeratedChain& chain, const ModelParams& p,
                          StopKind kind) {
  const int64_t n = chain.n_states;
  std::vector<uint8_t> absorb(n);
  for (int64_t x = 0; x < n; ++x) absorb[x] = chain.absorbing(x, kind);
  if (absorb[0]) return 0.0;

  // Gauss-Seidel on E[x] = 1 + sum_y P(x,y) E[y] over transient states.
  std::vector<double> e(n, 0.0);
  std::vector<std::pair<int64_t, double>> mv;
  const int max_iter = 200000;
  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0.0;
    for (int64_t x = 0; x < n; ++x) {
      if (absorb[x]) continue;
      chain.moves(x, p.T, mv);
      double acc = 0.0, leave = 0.0;
      for (const auto& [y, w] : mv) {
        leave += w;
        if (!absorb[y]) acc += w * e[y];
      }
      if (leave <= 0.0)
        throw std::runtime_error("exact_hitting_time_oracle: absorption unreachable");
      // E[x] = 1 + (1 - leave) E[x] + acc  =>  E[x] = (1 + acc) / leave
      const double updated = (1.0 + acc) / leave;
      const double rel = std::abs(updated - e[x]) / (1.0 + std::abs(updated));
      if (rel > worst) worst = rel;
      e[x] = updated;
    }
    if (worst < 1e-13) break;
    if (iter == max_iter - 1)
      throw std::runtime_error("exact_hitting_time_oracle: no convergence");
  }
  return e[0] / chain.n_sites;
}

double oracle_per_sweep(const EnumeratedChain& chain, const ModelParams& p,
                        StopRule stop) {
  const int64_t n = chain.n_states;
  if (n > 4096)
    throw std::invalid_argument(
        "exact_hitting_time_oracle: PER_SWEEP needs q^(L^2) <= 4096");
  std::vector<uint8_t> absorb(n);
  for (int64_t x = 0; x < n; ++x) absorb[x] = chain.absorbing(x, stop.kind);
  if (absorb[0]) return 0.0;

  // Sparse single-attempt kernel.
  std::vector<std::vector<std::pair<int64_t, double>>> kernel(n);
  std::vector<double> stay(n);
  for (int64_t x = 0; x < n; ++x) {
    chain.moves(x, p.T, kernel[x]);
    double leave = 0.0;
    for (const auto& [y, w] : kernel[x]) leave += w;
    stay[x] = 1.0 - leave;
  }

  // Dense M = P^(L^2 * check_interval), row-stochastic.
  const uint64_t m_steps = stop.check_interval * static_cast<uint64_t>(chain.n_sites);
  std::vector<double> cur(n * n, 0.0), nxt(n * n);
  for (int64_t x = 0; x < n; ++x) cur[x * n + x] = 1.0;
  for (uint64_t s = 0; s < m_steps; ++s) {
    for (int64_t x = 0; x < n; ++x) {
      double* row = &nxt[x * n];
      const double* self = &cur[x * n];
      for (int64_t y = 0; y < n; ++y) row[y] = stay[x] * self[y];
      for (const auto& [z, w] : kernel[x]) {
        const double* src = &cur[z * n];
        for (int64_t y = 0; y < n; ++y) row[y] += w * src[y];
      }
    }
    cur.swap(nxt);
  }

  // Hitting-time solve (I - Q) E = 1 over transient states, Gaussian
  // elimination with partial pivoting.
  std::vector<int64_t> transient;
  std::vector<int64_t> slot(n, -1);
  for (int64_t x = 0; x < n; ++x)
    if (!absorb[x]) {
      slot[x] = static_cast<int64_t>(transient.size());
      transient.push_back(x);
    }
  const int64_t t = static_cast<int64_t>(transient.size());
  std::vector<double> a(t * (t + 1), 0.0);
  for (int64_t r = 0; r < t; ++r) {
    const int64_t x = transient[r];
    for (int64_t c = 0; c < t; ++c)
      a[r * (t + 1) + c] = (r == c ? 1.0 : 0.0) - cur[x * n + transient[c]];
    a[r * (t + 1) + t] = 1.0;
  }
  for (int64_t col = 0; col < t; ++col) {
    int64_t piv = col;
    for (int64_t r = col + 1; r < t; ++r)
      if (std::abs(a[r * (t + 1) + col]) > std::abs(a[piv * (t + 1) + col])) piv = r;
    if (piv != col)
      for (int64_t c = col; c <= t; ++c)
        std::swap(a[col * (t + 1) + c], a[piv * (t + 1) + c]);
    const double d = a[col * (t + 1) + col];
    if (d == 0.0) throw std::runtime_error("exact_hitting_time_oracle: singular system");
    for (int64_t r = col + 1; r < t; ++r) {
      const double f = a[r * (t + 1) + col] / d;
      if (f == 0.0) continue;
      for (int64_t c = col; c <= t; ++c) a[r * (t + 1) + c] -= f * a[col * (t + 1) + c];
    }
  }
  std::vector<double> e(t);
  for (int64_t r = t - 1; r >= 0; --r) {
    double acc = a[r * (t + 1) + t];
    for (int64_t c = r + 1; c < t; ++c) acc -= a[r * (t + 1) + c] * e[c];
    e[r] = acc / a[r * (t + 1) + r];
  }
  return static_cast<double>(stop.check_interval) * e[slot[0]];
}

}  // namespace

double exact_hitting_time_oracle(const ModelParams& params, StopRule stop,
                                 OracleCadence cadence) {
  params.validate();
  if (params.is_xy())
    throw std::invalid_argument("exact_hitting_time_oracle: finite q only");
  if (params.T <= 0.0)
    throw std::invalid_argument("exact_hitting_time_oracle: T > 0 required");
  if (stop.check_interval < 1)
    throw std::invalid_argument("exact_hitting_time_oracle: check_interval < 1");
  const double size = std::pow(static_cast<double>(params.q), params.n_sites());
  if (size > 1e6)
    throw std::invalid_argument("exact_hitting_time_oracle: q^(L^2) > 1e6");

  EnumeratedChain chain(params);
  return cadence == OracleCadence::PER_ATTEMPT
             ? oracle_per_attempt(chain, params, stop.kind)
             : oracle_per_sweep(chain, params, stop);
}

}  // namespace clockmem
