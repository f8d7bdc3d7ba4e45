#pragma once
// Monte-Carlo validation of the analytic model: empirical sampling of kernel
// rows, plus physical simulations of the channel-sweep and packet-drop
// procedures whose closed forms the kernel approximates. Per-trial streams
// are seeded as seed ^ trial_index and aggregated in trial order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "hopmdp/model.hpp"
#include "hopmdp/rng.hpp"

namespace hopmdp {

struct TrialConfig {
  long long n_trials = 1000000;
  int horizon = 500;
  std::uint64_t seed = 1;
};

struct EmpiricalRow {
  std::map<int, long long> counts;  // next-state index -> hits
  long long total = 0;

  double frequency(int next) const {
    auto it = counts.find(next);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
  }
};

// Samples the chain's one-step behavior at (state, action) n_trials times.
inline EmpiricalRow empirical_transition_frequencies(const Mdp& mdp, int state, int action,
                                                     long long n_trials, std::uint64_t seed) {
  if (state < 0 || state >= static_cast<int>(mdp.size()))
    throw std::invalid_argument("empirical_transition_frequencies: bad state index");
  if (action < 0 || action >= static_cast<int>(mdp.actions[state].size()))
    throw std::invalid_argument("empirical_transition_frequencies: action unavailable");
  if (n_trials < 1) throw std::invalid_argument("empirical_transition_frequencies: n_trials >= 1");

  const auto& row = mdp.rows[state][action];
  std::vector<double> cdf;
  double acc = 0.0;
  for (const Transition& t : row) {
    acc += t.prob;
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;

  EmpiricalRow out;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (long long trial = 0; trial < n_trials; ++trial) {
    auto rng = seeded_engine(seed ^ static_cast<std::uint64_t>(trial));
    const double u = unif(rng);
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u > cdf[k]) ++k;
    ++out.counts[row[k].next];
  }
  out.total = n_trials;
  return out;
}

struct SweepHistogram {
  std::vector<long long> counts;  // counts[s-1] = trials detected at slot s
  long long n_trials = 0;

  int period() const { return static_cast<int>(counts.size()); }
  double probability(int slot) const {
    return static_cast<double>(counts.at(slot - 1)) / n_trials;
  }
  double mean_slot() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) acc += (i + 1.0) * counts[i];
    return acc / n_trials;
  }
};

// Physical short-term sweep: the attacker hops through a uniformly random
// ordering of the M channels, m per slot (last slot possibly smaller), and
// the victim sits on a uniform channel. Histogram of the detection slot.
inline SweepHistogram simulate_physical_sweep(int M, int m, long long n_trials,
                                              std::uint64_t seed) {
  if (m < 1 || m > M) throw std::invalid_argument("simulate_physical_sweep: require 1 <= m <= M");
  if (n_trials < 1) throw std::invalid_argument("simulate_physical_sweep: n_trials >= 1");

  const int period = (M + m - 1) / m;
  SweepHistogram hist;
  hist.counts.assign(period, 0);
  hist.n_trials = n_trials;

  std::vector<int> sequence(M);
  for (long long trial = 0; trial < n_trials; ++trial) {
    auto rng = seeded_engine(seed ^ static_cast<std::uint64_t>(trial));
    std::iota(sequence.begin(), sequence.end(), 0);
    std::shuffle(sequence.begin(), sequence.end(), rng);
    const int victim = std::uniform_int_distribution<int>(0, M - 1)(rng);
    for (int pos = 0; pos < M; ++pos) {
      if (sequence[pos] == victim) {
        ++hist.counts[pos / m];
        break;
      }
    }
  }
  return hist;
}

struct DropEstimate {
  long long drops = 0;
  long long n_trials = 0;
  double p_empirical = 0.0;
  double p_closed_form = 0.0;  // product of m/(M-j), j = 1..G-1
};

// Long-term strategy oracle with the radar frozen: given a landed first
// attack, the victim re-hops uniformly among the channels not attacked so
// far, the attacker re-randomizes excluding those channels, and the streak
// survives only if the victim is found in the very next slot. Estimates the
// probability that the streak reaches G (packet drop).
inline DropEstimate simulate_drop_chain(int M, int m, int G, long long n_trials,
                                        std::uint64_t seed) {
  if (G < 1 || G >= M) throw std::invalid_argument("simulate_drop_chain: require 1 <= G < M");
  if (m < 1 || m > M - G)
    throw std::invalid_argument("simulate_drop_chain: require 1 <= m <= M - G");
  if (n_trials < 1) throw std::invalid_argument("simulate_drop_chain: n_trials >= 1");

  DropEstimate est;
  est.n_trials = n_trials;
  est.p_closed_form = 1.0;
  for (int j = 1; j <= G - 1; ++j) est.p_closed_form *= static_cast<double>(m) / (M - j);

  std::vector<int> eligible;
  for (long long trial = 0; trial < n_trials; ++trial) {
    auto rng = seeded_engine(seed ^ static_cast<std::uint64_t>(trial));
    bool dropped = true;
    for (int j = 1; j <= G - 1; ++j) {
      // M - j channels remain un-attacked; label them 0..M-j-1.
      const int remaining = M - j;
      const int victim = std::uniform_int_distribution<int>(0, remaining - 1)(rng);
      eligible.resize(remaining);
      std::iota(eligible.begin(), eligible.end(), 0);
      // Partial Fisher-Yates: the first m entries form the next-slot visit set.
      bool found = false;
      for (int k = 0; k < m; ++k) {
        const int pick = std::uniform_int_distribution<int>(k, remaining - 1)(rng);
        std::swap(eligible[k], eligible[pick]);
        if (eligible[k] == victim) found = true;
      }
      if (!found) {
        dropped = false;
        break;
      }
    }
    if (dropped) ++est.drops;
  }
  est.p_empirical = static_cast<double>(est.drops) / est.n_trials;
  return est;
}

struct SlotGap {
  int slot = 0;
  double analytic = 0.0;   // per-slot detection mass under the m/M model
  double physical = 0.0;   // exact physical sweep mass, |slot|/M
  double empirical = 0.0;  // simulate_physical_sweep frequency
};

// Side-by-side per-slot detection distribution over one sweep period:
// the memoryless m/M approximation vs the physical partition sweep. Both
// columns are proper distributions over the period.
inline std::vector<SlotGap> kernel_gap_report(const ModelParams& p, long long n_trials,
                                              std::uint64_t seed) {
  validate_params(p);
  const int period = p.K() + 1;
  const double f = static_cast<double>(p.m) / p.M;

  SweepHistogram hist = simulate_physical_sweep(p.M, p.m, n_trials, seed);

  std::vector<SlotGap> rows;
  double survive = 1.0;
  for (int s = 1; s <= period; ++s) {
    SlotGap g;
    g.slot = s;
    if (s < period) {
      g.analytic = survive * f;
      survive *= 1.0 - f;
    } else {
      g.analytic = survive;  // detection certain on the final slot
    }
    const int slot_size = std::min(p.m, p.M - (s - 1) * p.m);
    g.physical = static_cast<double>(slot_size) / p.M;
    g.empirical = hist.probability(s);
    rows.push_back(g);
  }
  return rows;
}

}  // namespace hopmdp
