#pragma once
// Scenario configuration: one JSON document describing the surface, the model
// parameters, solver/oracle options and the MAC scenario. Every run is fully
// determined by the config plus the root seed; unknown keys are rejected so
// configs stay diffable and typo-proof.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopmdp/mac_sim.hpp"
#include "hopmdp/model.hpp"
#include "hopmdp/surface.hpp"

namespace hopmdp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  int start_zone = -1;  // -1: lowest zone id
};

struct OracleOptions {
  long long n_trials = 1000000;
  long long rollout_trials = 100000;
  int horizon = 500;
};

struct ScenarioConfig {
  Surface surface;
  ModelParams model;
  SolverOptions solver;
  OracleOptions oracle;
  MacScenario mac;
  std::uint64_t seed = 1;

  int start_zone() const {
    if (solver.start_zone >= 0) return solver.start_zone;
    int lowest = surface.zones.front().id;
    for (const auto& z : surface.zones) lowest = std::min(lowest, z.id);
    return lowest;
  }
};

// Fig-7-style default: hex flower, ring S1..S6 plus center S7; S7 carries the
// critical devices (7x the weight of S4) and S6 is its strongest neighbor.
inline ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.surface = build_hex7({1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 7.0});
  cfg.mac.zones = {{1, 1, 4, 0}, {2, 1, 4, 0}, {3, 1, 4, 0}};
  cfg.mac.attack_zone = 1;
  return cfg;
}

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::string& where,
                       const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for \"") + key + "\"");
  }
}

inline Surface parse_surface(const json& j) {
  check_keys(j, "surface", {"hex7_weights", "zones", "edges"});
  const bool hex = j.contains("hex7_weights");
  const bool full = j.contains("zones") || j.contains("edges");
  if (hex && full) throw ConfigError("surface: give either hex7_weights or zones+edges, not both");
  if (hex) {
    std::vector<double> w;
    read_field(j, "hex7_weights", w);
    return build_hex7(w);
  }
  if (!j.contains("zones") || !j.contains("edges"))
    throw ConfigError("surface: zones and edges are both required");
  std::vector<Zone> zones;
  for (const auto& zj : j.at("zones")) {
    check_keys(zj, "surface.zones[]", {"id", "label", "weight"});
    Zone z;
    read_field(zj, "id", z.id);
    read_field(zj, "weight", z.weight);
    z.label = "Z" + std::to_string(z.id);
    read_field(zj, "label", z.label);
    zones.push_back(z);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& ej : j.at("edges")) {
    if (!ej.is_array() || ej.size() != 2) throw ConfigError("surface.edges[]: expected [a, b]");
    edges.emplace_back(ej.at(0).get<int>(), ej.at(1).get<int>());
  }
  return make_surface(std::move(zones), edges);
}

inline ModelParams parse_model(const json& j, ModelParams p) {
  check_keys(j, "model",
             {"M", "m", "q", "G", "alpha", "beta", "delta", "c", "reward_attack", "reward_drop",
              "cost_busy", "cost_move", "cost_hop", "cost_detect", "penalty_forbidden"});
  read_field(j, "M", p.M);
  read_field(j, "m", p.m);
  read_field(j, "q", p.q);
  read_field(j, "G", p.G);
  read_field(j, "alpha", p.alpha);
  read_field(j, "beta", p.beta);
  read_field(j, "delta", p.delta);
  read_field(j, "c", p.c);
  read_field(j, "reward_attack", p.reward_attack);
  read_field(j, "reward_drop", p.reward_drop);
  read_field(j, "cost_busy", p.cost_busy);
  read_field(j, "cost_move", p.cost_move);
  read_field(j, "cost_hop", p.cost_hop);
  read_field(j, "cost_detect", p.cost_detect);
  read_field(j, "penalty_forbidden", p.penalty_forbidden);
  return p;
}

inline MacScenario parse_mac(const json& j, MacScenario sc) {
  check_keys(j, "mac",
             {"zones", "slot_us", "payload_bytes", "phy_rate_bps", "overhead_us",
              "sim_duration_s", "attack_start_s", "attack_zone", "attack_enabled",
              "sample_interval_s", "cw_min", "cw_max", "retry_limit", "malicious_cw"});
  if (j.contains("zones")) {
    sc.zones.clear();
    for (const auto& zj : j.at("zones")) {
      check_keys(zj, "mac.zones[]", {"id", "victim_bs", "victim_ue", "benign_ap"});
      ZoneRoster r;
      read_field(zj, "id", r.zone_id);
      read_field(zj, "victim_bs", r.victim_bs);
      read_field(zj, "victim_ue", r.victim_ue);
      read_field(zj, "benign_ap", r.benign_ap);
      sc.zones.push_back(r);
    }
  }
  read_field(j, "slot_us", sc.slot_us);
  read_field(j, "payload_bytes", sc.payload_bytes);
  read_field(j, "phy_rate_bps", sc.phy_rate_bps);
  read_field(j, "overhead_us", sc.overhead_us);
  read_field(j, "sim_duration_s", sc.sim_duration_s);
  read_field(j, "attack_start_s", sc.attack_start_s);
  read_field(j, "attack_zone", sc.attack_zone);
  read_field(j, "attack_enabled", sc.attack_enabled);
  read_field(j, "sample_interval_s", sc.sample_interval_s);
  read_field(j, "cw_min", sc.cw_min);
  read_field(j, "cw_max", sc.cw_max);
  read_field(j, "retry_limit", sc.retry_limit);
  read_field(j, "malicious_cw", sc.malicious_cw);
  return sc;
}

}  // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& j) {
  using detail::check_keys;
  check_keys(j, "config root", {"surface", "model", "solver", "oracle", "mac", "seed"});

  ScenarioConfig cfg = default_config();
  if (j.contains("surface")) cfg.surface = detail::parse_surface(j.at("surface"));
  if (j.contains("model")) cfg.model = detail::parse_model(j.at("model"), cfg.model);
  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    check_keys(sj, "solver", {"tol", "max_iter", "start_zone"});
    detail::read_field(sj, "tol", cfg.solver.tol);
    detail::read_field(sj, "max_iter", cfg.solver.max_iter);
    detail::read_field(sj, "start_zone", cfg.solver.start_zone);
  }
  if (j.contains("oracle")) {
    const auto& oj = j.at("oracle");
    check_keys(oj, "oracle", {"n_trials", "rollout_trials", "horizon"});
    detail::read_field(oj, "n_trials", cfg.oracle.n_trials);
    detail::read_field(oj, "rollout_trials", cfg.oracle.rollout_trials);
    detail::read_field(oj, "horizon", cfg.oracle.horizon);
  }
  if (j.contains("mac")) cfg.mac = detail::parse_mac(j.at("mac"), cfg.mac);
  if (j.contains("seed")) detail::read_field(j, "seed", cfg.seed);
  cfg.mac.seed = cfg.seed;

  // Fail fast: every module-level validation runs before any command starts.
  validate_params(cfg.model);
  auto bad = validate(cfg.surface);
  if (!bad.empty()) throw ConfigError("surface: " + bad.front());
  validate_scenario(cfg.mac);
  if (!(cfg.solver.tol > 0)) throw ConfigError("solver.tol must be > 0");
  if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (cfg.solver.start_zone >= 0 && !cfg.surface.has_zone(cfg.solver.start_zone))
    throw ConfigError("solver.start_zone is not a surface zone");
  if (cfg.oracle.n_trials < 1 || cfg.oracle.rollout_trials < 1 || cfg.oracle.horizon < 1)
    throw ConfigError("oracle options must be >= 1");
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return parse_config(j);
}

}  // namespace hopmdp
