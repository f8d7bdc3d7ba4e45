#pragma once
// Discounted-MDP solver and induced-chain analysis: value iteration, greedy
// policy extraction, stationary distribution of the policy's chain, per-zone
// sojourn shares and dominant/secondary action summaries, plus a Monte-Carlo
// rollout cross-check of the value function.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hopmdp/model.hpp"
#include "hopmdp/rng.hpp"

namespace hopmdp {

struct ValueFunction {
  std::vector<double> values;
};

struct ValueIterationResult {
  ValueFunction V;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // sup-norm Bellman residual per sweep
};

// Deterministic policy: index into mdp.actions[s] for each state.
struct Policy {
  std::vector<int> choice;
};

struct StationaryDistribution {
  std::vector<double> pi;
  std::vector<int> recurrent_class;  // sorted state indices
  bool converged = false;
  double residual = 0.0;  // ||pi P - pi||_1 at termination
};

inline double bellman_backup(const Mdp& mdp, const std::vector<double>& v, std::size_t s, int a) {
  double q = 0.0;
  for (const Transition& t : mdp.rows[s][a]) q += t.prob * (t.reward + mdp.discount * v[t.next]);
  return q;
}

inline ValueIterationResult value_iteration(const Mdp& mdp, double tol = 1e-12,
                                            int max_iter = 100000) {
  if (!(mdp.discount >= 0.0 && mdp.discount < 1.0))
    throw std::invalid_argument("value_iteration: require 0 <= discount < 1");
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: require tol > 0");

  ValueIterationResult res;
  std::vector<double> v(mdp.size(), 0.0), v2(mdp.size(), 0.0);
  for (int it = 1; it <= max_iter; ++it) {
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
      double best = bellman_backup(mdp, v, s, 0);
      for (std::size_t a = 1; a < mdp.actions[s].size(); ++a)
        best = std::max(best, bellman_backup(mdp, v, s, static_cast<int>(a)));
      v2[s] = best;
      residual = std::max(residual, std::abs(v2[s] - v[s]));
    }
    v.swap(v2);
    res.residuals.push_back(residual);
    res.iterations = it;
    if (residual <= tol) {
      res.converged = true;
      break;
    }
  }
  res.V.values = std::move(v);
  return res;
}

// Greedy policy w.r.t. the one-step backup. Ties resolve to the earliest
// action in the canonical order sh < mh(lowest id) < ms(lowest id).
inline Policy extract_policy(const Mdp& mdp, const ValueFunction& vf) {
  Policy pol;
  pol.choice.resize(mdp.size(), 0);
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    double best = bellman_backup(mdp, vf.values, s, 0);
    int arg = 0;
    for (std::size_t a = 1; a < mdp.actions[s].size(); ++a) {
      double q = bellman_backup(mdp, vf.values, s, static_cast<int>(a));
      if (q > best) {
        best = q;
        arg = static_cast<int>(a);
      }
    }
    pol.choice[s] = arg;
  }
  return pol;
}

// Dense row-stochastic matrix of the chain induced by a deterministic policy.
inline std::vector<std::vector<double>> induced_chain(const Mdp& mdp, const Policy& policy) {
  std::vector<std::vector<double>> chain(mdp.size(), std::vector<double>(mdp.size(), 0.0));
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    for (const Transition& t : mdp.rows[s][policy.choice[s]]) chain[s][t.next] += t.prob;
  }
  return chain;
}

namespace detail {

// Closed communicating classes among the states reachable from `start`
// (Kosaraju on the reachable subgraph).
inline std::vector<int> recurrent_states(const std::vector<std::vector<double>>& chain,
                                         int start) {
  const int n = static_cast<int>(chain.size());
  std::vector<char> reach(n, 0);
  {
    std::vector<int> stack{start};
    reach[start] = 1;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j)
        if (chain[cur][j] > 0.0 && !reach[j]) {
          reach[j] = 1;
          stack.push_back(j);
        }
    }
  }

  // Kosaraju pass 1: finish order (iterative DFS).
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s0 = 0; s0 < n; ++s0) {
    if (!reach[s0] || seen[s0]) continue;
    std::vector<std::pair<int, int>> st{{s0, 0}};
    seen[s0] = 1;
    while (!st.empty()) {
      auto& [u, j] = st.back();
      if (j >= n) {
        order.push_back(u);
        st.pop_back();
        continue;
      }
      int v = j++;
      if (chain[u][v] > 0.0 && reach[v] && !seen[v]) {
        seen[v] = 1;
        st.push_back({v, 0});
      }
    }
  }

  // Pass 2: components on the transposed graph.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != -1) continue;
    std::vector<int> stack{*it};
    comp[*it] = ncomp;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (chain[v][u] > 0.0 && reach[v] && comp[v] == -1) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
    }
    ++ncomp;
  }

  std::vector<char> closed(ncomp, 1);
  for (int u = 0; u < n; ++u) {
    if (!reach[u]) continue;
    for (int v = 0; v < n; ++v)
      if (chain[u][v] > 0.0 && comp[v] != comp[u]) closed[comp[u]] = 0;
  }

  std::vector<int> rec;
  for (int u = 0; u < n; ++u)
    if (reach[u] && closed[comp[u]]) rec.push_back(u);
  return rec;
}

}  // namespace detail

// Stationary distribution of the chain started at `start`. Runs damped
// power iteration x <- x (I + P)/2 — a running two-term average that keeps
// periodic chains (which deterministic policies readily create) convergent —
// and reports the closed classes as the recurrent support. Mass outside the
// recurrent class decays to zero geometrically; residual entries below tol
// are truncated before renormalizing.
inline StationaryDistribution stationary_distribution(
    const std::vector<std::vector<double>>& chain, int start, double tol = 1e-12,
    int max_iter = 500000) {
  const int n = static_cast<int>(chain.size());
  if (start < 0 || start >= n) throw std::invalid_argument("stationary: start out of range");

  StationaryDistribution out;
  out.recurrent_class = detail::recurrent_states(chain, start);

  std::vector<double> x(n, 0.0), xp(n, 0.0);
  x[start] = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::fill(xp.begin(), xp.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < n; ++j)
        if (chain[i][j] > 0.0) xp[j] += x[i] * chain[i][j];
    }
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += std::abs(xp[i] - x[i]);
    out.residual = res;
    if (res <= tol) {
      out.converged = true;
      break;
    }
    for (int i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + xp[i]);
  }

  std::vector<char> rec(n, 0);
  for (int s : out.recurrent_class) rec[s] = 1;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!rec[i]) x[i] = 0.0;
    total += x[i];
  }
  if (total <= 0.0) throw std::logic_error("stationary: no mass on recurrent class");
  for (int i = 0; i < n; ++i) x[i] /= total;
  out.pi = std::move(x);
  return out;
}

// Location-marginal of pi, normalized to sum to 1. Keys are zone ids.
inline std::map<int, double> sojourn_by_location(const StationaryDistribution& dist,
                                                 const std::vector<State>& states) {
  std::map<int, double> out;
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out[states[i].location] += dist.pi[i];
    total += dist.pi[i];
  }
  if (total > 0.0)
    for (auto& [id, v] : out) v /= total;
  return out;
}

struct ZoneActionSummary {
  int zone_id = 0;
  bool visited = false;
  Action dominant{};
  double dominant_mass = 0.0;
  std::optional<Action> secondary;
  double secondary_mass = 0.0;
};

// Per-zone dominant and secondary actions, ranked by the stationary mass of
// the states choosing them. Forced D-relocations are not strategy choices
// and are excluded from the ranking.
inline std::vector<ZoneActionSummary> policy_summary(const Mdp& mdp, const Policy& policy,
                                                     const StationaryDistribution& dist) {
  std::vector<ZoneActionSummary> out;
  for (const Zone& z : mdp.surface.zones) {
    std::map<Action, double> mass;
    double zone_mass = 0.0;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
      if (mdp.states[s].location != z.id) continue;
      zone_mass += dist.pi[s];
      if (mdp.states[s].kind == Kind::D) continue;
      mass[mdp.actions[s][policy.choice[s]]] += dist.pi[s];
    }

    ZoneActionSummary zs;
    zs.zone_id = z.id;
    zs.visited = zone_mass > 0.0;
    if (zs.visited) {
      std::vector<std::pair<Action, double>> ranked(mass.begin(), mass.end());
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      zs.dominant = ranked[0].first;
      zs.dominant_mass = ranked[0].second;
      if (ranked.size() > 1 && ranked[1].second > 0.0) {
        zs.secondary = ranked[1].first;
        zs.secondary_mass = ranked[1].second;
      }
    }
    out.push_back(zs);
  }
  return out;
}

struct RolloutStats {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  int n_trials = 0;
};

// Monte-Carlo estimate of the discounted return under `policy` from `start`.
// Trials are independently seeded (seed + trial index) and reduced in trial
// order, so the result does not depend on any execution schedule.
inline RolloutStats rollout_value_check(const Mdp& mdp, const Policy& policy, int start,
                                        int horizon, int n_trials, std::uint64_t seed) {
  if (horizon < 1 || n_trials < 1)
    throw std::invalid_argument("rollout: require horizon >= 1 and n_trials >= 1");

  // Per-state sampling tables under the policy.
  const int n = static_cast<int>(mdp.size());
  std::vector<std::vector<double>> cdf(n);
  std::vector<std::vector<int>> nxt(n);
  std::vector<std::vector<double>> rew(n);
  for (int s = 0; s < n; ++s) {
    double acc = 0.0;
    for (const Transition& t : mdp.rows[s][policy.choice[s]]) {
      acc += t.prob;
      cdf[s].push_back(acc);
      nxt[s].push_back(t.next);
      rew[s].push_back(t.reward);
    }
    cdf[s].back() = 1.0;  // guard against round-off in the final bin
  }

  double sum = 0.0, sumsq = 0.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < n_trials; ++trial) {
    auto rng = seeded_engine(seed + static_cast<std::uint64_t>(trial));
    int s = start;
    double ret = 0.0, disc = 1.0;
    for (int t = 0; t < horizon; ++t) {
      const double u = unif(rng);
      const auto& c = cdf[s];
      std::size_t k = 0;
      while (k + 1 < c.size() && u > c[k]) ++k;
      ret += disc * rew[s][k];
      disc *= mdp.discount;
      s = nxt[s][k];
    }
    sum += ret;
    sumsq += ret * ret;
  }

  RolloutStats st;
  st.n_trials = n_trials;
  st.mean = sum / n_trials;
  const double var = std::max(0.0, sumsq / n_trials - st.mean * st.mean);
  st.stddev = std::sqrt(var);
  st.stderr_mean = st.stddev / std::sqrt(static_cast<double>(n_trials));
  return st;
}

}  // namespace hopmdp
