#pragma once
// Attacker MDP over (zone, channel-hunt phase).
//
// Per zone the chain has four state kinds:
//   P    the sensed channel is occupied by the primary user (radar),
//   H_i  i consecutive slots without locating the victim, 1 <= i <= K,
//   A_j  j consecutive successful attacks, 1 <= j <= G,
//   D    flagged by the intrusion detection system.
// Actions: sh (stay + hop channels), mh(t) / ms(t) (move to neighbor zone t,
// hopping / keeping the channel set). Detected attackers are force-relocated
// to a uniformly random neighbor. stay+stay is excluded from the action set;
// its penalty constant is retained for rollout sanity checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopmdp/surface.hpp"

namespace hopmdp {

struct ModelParams {
  int M = 10;  // channels per zone
  int m = 2;   // channels sensed per slot
  int q = 2;   // mini-slots per victim transmission
  int G = 4;   // consecutive failures after which the victim drops its packet

  double alpha = 0.1;  // PU OFF -> ON probability
  double beta = 0.9;   // PU ON -> OFF probability
  double delta = 0.95; // discount factor
  double c = 2.0;      // IDS performance parameter (lower = better IDS)

  double reward_attack = 1.0;        // gain per landed attack (scaled by zone weight)
  double reward_drop = 10.0;         // gain for forcing a packet drop
  double cost_busy = 0.2;            // sensing a busy channel
  double cost_move = 0.5;            // physical move between zones
  double cost_hop = 0.1;             // channel hop
  double cost_detect = 20.0;         // being flagged by the IDS
  double penalty_forbidden = 100.0;  // stay+stay penalty (action not offered)

  // Hopping states before the sweep period forces certain detection:
  // one period is ceil(M/m) slots and its final slot is the certain one.
  int K() const { return (M + m - 1) / m - 1; }
  // Stationary busy probability of the ON/OFF primary user process.
  double rho() const { return alpha / (alpha + beta); }
};

inline void validate_params(const ModelParams& p) {
  auto fail = [](const std::string& why) { throw std::invalid_argument("invalid params: " + why); };
  if (p.m < 1 || p.m > p.M) fail("require 1 <= m <= M");
  if (p.G < 1 || p.G >= p.M) fail("require 1 <= G < M");
  if (p.m > p.M - p.G) fail("require m <= M - G so streak attack probabilities stay <= 1");
  if (p.q < 1) fail("require q >= 1");
  if (p.K() < 1) fail("require ceil(M/m) - 1 >= 1 (m = M leaves no hopping states)");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) fail("require 0 < alpha < 1");
  if (!(p.beta > 0.0 && p.beta < 1.0)) fail("require 0 < beta < 1");
  if (!(p.delta > 0.0 && p.delta < 1.0)) fail("require 0 < delta < 1");
  if (!(p.c > 0.0)) fail("require c > 0");
  for (double v : {p.reward_attack, p.reward_drop, p.cost_busy, p.cost_move, p.cost_hop,
                   p.cost_detect, p.penalty_forbidden}) {
    if (!std::isfinite(v)) fail("reward/cost constants must be finite");
  }
  for (double v : {p.cost_busy, p.cost_move, p.cost_hop, p.cost_detect, p.penalty_forbidden}) {
    if (v < 0.0) fail("costs must be nonnegative");
  }
}

// IDS detection probability after the j-th consecutive attack: (j-1)/(j-1+c).
// The first attack is always undetected.
inline double detection_prob(int j, double c) {
  if (j < 1) throw std::invalid_argument("detection_prob: require j >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("detection_prob: require c > 0");
  return static_cast<double>(j - 1) / (static_cast<double>(j - 1) + c);
}

// Probability of landing on the victim's channel from hopping state H_i:
// m/M per slot, certain on the final slot of the sweep period.
inline double attack_prob_hop(int i, const ModelParams& p) {
  if (i < 1 || i > p.K()) throw std::invalid_argument("attack_prob_hop: i out of range");
  if (i < p.K()) return static_cast<double>(p.m) / p.M;
  return 1.0;
}

// Probability of re-acquiring the victim after j successful attacks: the
// victim avoids the j attacked channels, so the hunt narrows to M - j.
inline double attack_prob_streak(int j, const ModelParams& p) {
  if (j < 1 || j > p.G) throw std::invalid_argument("attack_prob_streak: j out of range");
  return static_cast<double>(p.m) / (p.M - j);
}

enum class Kind : std::uint8_t { P, H, A, D };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::P: return "P";
    case Kind::H: return "H";
    case Kind::A: return "A";
    case Kind::D: return "D";
  }
  return "?";
}

struct State {
  int location = 0;       // zone id
  Kind kind = Kind::P;
  int index = 0;          // 1..K for H, 1..G for A, 0 otherwise

  bool operator==(const State& o) const {
    return location == o.location && kind == o.kind && index == o.index;
  }
};

inline std::string state_name(const State& s) {
  std::string n = kind_name(s.kind);
  if (s.kind == Kind::H || s.kind == Kind::A) n += std::to_string(s.index);
  return n;
}

struct Action {
  enum class Type : std::uint8_t { SH, MH, MS, Reloc };
  Type type = Type::SH;
  int target = -1;  // neighbor zone id for MH/MS, unused otherwise

  bool operator==(const Action& o) const { return type == o.type && target == o.target; }
  bool operator<(const Action& o) const {
    if (type != o.type) return type < o.type;
    return target < o.target;
  }
};

inline std::string action_name(const Action& a) {
  switch (a.type) {
    case Action::Type::SH: return "sh";
    case Action::Type::MH: return "mh";
    case Action::Type::MS: return "ms";
    case Action::Type::Reloc: return "relocate";
  }
  return "?";
}

// Canonical state ordering: by zone (surface order), then P, H_1..H_K,
// A_1..A_G, D. This ordering is part of the CSV output contract.
inline std::vector<State> state_space(const ModelParams& p, const Surface& surface) {
  validate_params(p);
  std::vector<State> out;
  out.reserve(surface.zones.size() * (p.K() + p.G + 2));
  for (const auto& z : surface.zones) {
    out.push_back({z.id, Kind::P, 0});
    for (int i = 1; i <= p.K(); ++i) out.push_back({z.id, Kind::H, i});
    for (int j = 1; j <= p.G; ++j) out.push_back({z.id, Kind::A, j});
    out.push_back({z.id, Kind::D, 0});
  }
  return out;
}

namespace detail {

// Reward rule by action and destination kind. w is the importance weight of
// the destination zone; it scales only the positive gains. Landing in A_G
// means the packet dropped, which earns Q instead of L (the two coincide
// when G = 1). Assumes the triple is realizable; see reward() below.
inline double reward_rule(const Action& a, const State& next, const ModelParams& p,
                          const Surface& surface) {
  const double w = surface.zone(next.location).weight;
  const double gain = (next.index == p.G) ? w * p.reward_drop : w * p.reward_attack;
  switch (a.type) {
    case Action::Type::SH:
      switch (next.kind) {
        case Kind::H: return -p.cost_hop;
        case Kind::A: return gain - p.cost_hop;
        case Kind::P: return -p.cost_busy - p.cost_hop;
        case Kind::D: return -p.cost_detect - p.cost_hop;
      }
      break;
    case Action::Type::MH:
      switch (next.kind) {
        case Kind::H: return -p.cost_hop - p.cost_move;
        case Kind::A: return gain - p.cost_hop - p.cost_move;
        default: return -p.cost_busy - p.cost_hop - p.cost_move;  // P
      }
    case Action::Type::MS:
      switch (next.kind) {
        case Kind::H: return -p.cost_move;
        case Kind::A: return gain - p.cost_move;
        default: return -p.cost_busy - p.cost_move;  // P
      }
    case Action::Type::Reloc:
      return -p.cost_move;
  }
  throw std::logic_error("reward_rule: unreachable");
}

}  // namespace detail

inline std::vector<std::pair<State, double>> transition_row(const State& s, const Action& a,
                                                            const ModelParams& p,
                                                            const Surface& surface);

// Reward for a realizable (state, action, next) triple; throws if the triple
// has zero kernel probability.
inline double reward(const State& s, const Action& a, const State& next, const ModelParams& p,
                     const Surface& surface) {
  for (const auto& [st, prob] : transition_row(s, a, p, surface)) {
    if (st == next && prob > 0.0) return detail::reward_rule(a, next, p, surface);
  }
  throw std::invalid_argument("reward: transition " + state_name(s) + " --" + action_name(a) +
                              "--> " + state_name(next) + " has zero probability");
}

// One kernel row. Entries with zero probability are omitted.
inline std::vector<std::pair<State, double>> transition_row(const State& s, const Action& a,
                                                            const ModelParams& p,
                                                            const Surface& surface) {
  const double rho = p.rho();
  const double stay_clear = std::pow(1.0 - p.alpha, p.q);  // radar stays off through q mini-slots

  std::vector<std::pair<State, double>> row;
  auto push = [&row](State st, double pr) {
    if (pr > 0.0) row.emplace_back(st, pr);
  };

  // Distribution over {H_succ, A_succ, P} in the destination zone given the
  // per-slot attack probability pat. det splits the attack mass toward D.
  auto hunt_step = [&](int zone, State h_succ, State a_succ, double pat, double det) {
    push(h_succ, (1.0 - rho) * (1.0 - pat));
    push(a_succ, (1.0 - rho) * stay_clear * pat * (1.0 - det));
    if (det > 0.0) push({zone, Kind::D, 0}, (1.0 - rho) * stay_clear * pat * det);
    push({zone, Kind::P, 0}, rho + (1.0 - rho) * (1.0 - stay_clear) * pat);
  };

  const int l = s.location;
  const double fresh = static_cast<double>(p.m) / p.M;

  switch (a.type) {
    case Action::Type::SH: {
      if (s.kind == Kind::D) throw std::invalid_argument("sh unavailable in D");
      if (s.kind == Kind::H) {
        // H_K has pat = 1, so the H-successor mass vanishes there.
        hunt_step(l, {l, Kind::H, s.index + 1}, {l, Kind::A, 1}, attack_prob_hop(s.index, p), 0.0);
      } else if (s.kind == Kind::P) {
        hunt_step(l, {l, Kind::H, 1}, {l, Kind::A, 1}, fresh, 0.0);
      } else {  // A_j
        if (s.index < p.G) {
          hunt_step(l, {l, Kind::H, 1}, {l, Kind::A, s.index + 1},
                    attack_prob_streak(s.index, p), detection_prob(s.index, p.c));
        } else {
          // Post-drop: the victim's avoid-list resets, the attacker
          // re-randomizes over all M channels and a fresh streak begins.
          hunt_step(l, {l, Kind::H, 1}, {l, Kind::A, 1}, fresh, detection_prob(p.G, p.c));
        }
      }
      break;
    }
    case Action::Type::MH:
    case Action::Type::MS: {
      if (s.kind == Kind::D) throw std::invalid_argument("move actions unavailable in D");
      auto nb = neighbors(surface, l);
      if (std::find(nb.begin(), nb.end(), a.target) == nb.end())
        throw std::invalid_argument("move target " + std::to_string(a.target) +
                                    " is not adjacent to zone " + std::to_string(l));
      // Channel assignments are independent across zones, so both move
      // actions land in a fresh sweep period at the target.
      hunt_step(a.target, {a.target, Kind::H, 1}, {a.target, Kind::A, 1}, fresh, 0.0);
      break;
    }
    case Action::Type::Reloc: {
      if (s.kind != Kind::D) throw std::invalid_argument("relocate only available in D");
      auto nb = neighbors(surface, l);
      if (nb.empty()) nb.push_back(l);  // single-zone surface: reset in place
      const double pr = 1.0 / nb.size();
      for (int t : nb) push({t, Kind::H, 1}, pr);
      break;
    }
  }
  return row;
}

struct Transition {
  int next = 0;
  double prob = 0.0;
  double reward = 0.0;
};

struct Mdp {
  std::vector<State> states;
  std::vector<std::vector<Action>> actions;              // per state, canonical order
  std::vector<std::vector<std::vector<Transition>>> rows;  // [state][action]
  double discount = 0.95;
  Surface surface;
  ModelParams params;

  std::size_t size() const { return states.size(); }

  std::size_t state_index(int location, Kind kind, int index = 0) const {
    const std::size_t block = params.K() + params.G + 2;
    std::size_t base = surface.zone_pos(location) * block;
    switch (kind) {
      case Kind::P: return base;
      case Kind::H: return base + index;
      case Kind::A: return base + params.K() + index;
      case Kind::D: return base + block - 1;
    }
    throw std::logic_error("bad kind");
  }
};

inline Mdp build_mdp(const ModelParams& p, const Surface& surface) {
  validate_params(p);
  auto bad = validate(surface);
  if (!bad.empty()) throw std::invalid_argument("build_mdp: invalid surface: " + bad.front());

  Mdp mdp;
  mdp.surface = surface;
  mdp.params = p;
  mdp.discount = p.delta;
  mdp.states = state_space(p, surface);

  mdp.actions.resize(mdp.states.size());
  mdp.rows.resize(mdp.states.size());
  for (std::size_t si = 0; si < mdp.states.size(); ++si) {
    const State& s = mdp.states[si];
    std::vector<Action>& acts = mdp.actions[si];
    if (s.kind == Kind::D) {
      acts.push_back({Action::Type::Reloc, -1});
    } else {
      acts.push_back({Action::Type::SH, -1});
      for (int t : neighbors(surface, s.location)) acts.push_back({Action::Type::MH, t});
      for (int t : neighbors(surface, s.location)) acts.push_back({Action::Type::MS, t});
    }

    for (const Action& a : acts) {
      std::vector<Transition> row;
      double sum = 0.0;
      for (const auto& [next, prob] : transition_row(s, a, p, surface)) {
        if (prob < 0.0 || prob > 1.0)
          throw std::logic_error("build_mdp: kernel entry outside [0,1]");
        row.push_back({static_cast<int>(mdp.state_index(next.location, next.kind, next.index)),
                       prob, detail::reward_rule(a, next, p, surface)});
        sum += prob;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::logic_error("build_mdp: kernel row does not sum to 1");
      mdp.rows[si].push_back(std::move(row));
    }
  }
  return mdp;
}

}  // namespace hopmdp
