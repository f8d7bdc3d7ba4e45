#pragma once
// Desk-scale slotted CSMA/CA coexistence simulator. Zones are
// interference-isolated; within a zone, saturated stations contend with
// standard DCF backoff (uniform draw in [0, CW-1], CW doubling on collision,
// reset on success) while a malicious AP uses a fixed selfish CW. All channel
// time is accounted in integer nanoseconds, so idle + success + collision
// partitions the simulated span exactly.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopmdp/rng.hpp"

namespace hopmdp {

enum class StationRole { VictimBs, VictimUe, BenignAp, MaliciousAp };

struct StationConfig {
  StationRole role = StationRole::VictimUe;
  int cw_min = 16;
  int cw_max = 1024;
  int retry_limit = 4;  // consecutive failures before the head frame drops
  int zone = 0;
};

inline void validate_station(const StationConfig& st) {
  if (st.cw_min < 1 || st.cw_min > st.cw_max)
    throw std::invalid_argument("station: require 1 <= cw_min <= cw_max");
  if (st.retry_limit < 1) throw std::invalid_argument("station: require retry_limit >= 1");
}

struct ZoneRoster {
  int zone_id = 0;
  int victim_bs = 1;
  int victim_ue = 4;
  int benign_ap = 0;
};

struct MacScenario {
  std::vector<ZoneRoster> zones;
  double slot_us = 9.0;
  int payload_bytes = 1000;
  double phy_rate_bps = 155e6;
  double overhead_us = 50.0;  // DIFS + ACK exchange folded together
  double sim_duration_s = 40.0;
  double attack_start_s = 20.0;
  int attack_zone = 1;
  bool attack_enabled = true;
  double sample_interval_s = 1.0;
  std::uint64_t seed = 1;
  int cw_min = 16;
  int cw_max = 1024;
  int retry_limit = 4;
  int malicious_cw = 2;
};

inline void validate_scenario(const MacScenario& sc) {
  auto fail = [](const std::string& why) { throw std::invalid_argument("scenario: " + why); };
  if (sc.zones.empty()) fail("at least one zone required");
  std::set<int> ids;
  for (const auto& z : sc.zones) {
    if (!ids.insert(z.zone_id).second) fail("duplicate zone id");
    if (z.victim_bs < 0 || z.victim_ue < 0 || z.benign_ap < 0) fail("negative station count");
  }
  if (sc.payload_bytes <= 0) fail("payload_bytes must be > 0");
  if (!(sc.phy_rate_bps > 0)) fail("phy_rate_bps must be > 0");
  if (!(sc.slot_us > 0)) fail("slot_us must be > 0");
  if (sc.overhead_us < 0) fail("overhead_us must be >= 0");
  if (!(sc.sim_duration_s > 0)) fail("sim_duration_s must be > 0");
  if (sc.attack_start_s < 0 || sc.attack_start_s > sc.sim_duration_s)
    fail("require 0 <= attack_start_s <= sim_duration_s");
  if (!(sc.sample_interval_s > 0)) fail("sample_interval_s must be > 0");
  if (sc.attack_enabled && ids.count(sc.attack_zone) == 0) fail("attack_zone not in zone list");
  StationConfig honest{StationRole::VictimUe, sc.cw_min, sc.cw_max, sc.retry_limit, 0};
  validate_station(honest);
  StationConfig mal{StationRole::MaliciousAp, sc.malicious_cw, sc.malicious_cw, sc.retry_limit, 0};
  validate_station(mal);
}

struct PhaseAgg {
  std::int64_t payload_ns = 0;  // delivered benign payload airtime
  double delay_sum_s = 0.0;
  long long completions = 0;
  long long drops = 0;
  std::int64_t elapsed_ns = 0;

  double throughput() const {
    return elapsed_ns > 0 ? static_cast<double>(payload_ns) / elapsed_ns : 0.0;
  }
  double mean_delay_s() const { return completions > 0 ? delay_sum_s / completions : 0.0; }
};

struct SamplePoint {
  double t_s = 0.0;
  double throughput = 0.0;    // running average from t = 0
  double mean_delay_s = 0.0;  // running average from t = 0
  bool attack_phase = false;
  long long completions = 0;
  double delay_sum_s = 0.0;
};

struct StationStats {
  StationRole role = StationRole::VictimUe;
  bool malicious = false;
  std::int64_t payload_ns = 0;
  long long completions = 0;
  long long drops = 0;
  double delay_sum_s = 0.0;
};

struct ZoneMetrics {
  int zone_id = 0;
  std::int64_t idle_ns = 0, success_ns = 0, collision_ns = 0, elapsed_ns = 0;
  PhaseAgg benign, attack, total;
  std::vector<StationStats> stations;
  std::vector<SamplePoint> series;
};

struct Metrics {
  std::vector<ZoneMetrics> zones;
  std::vector<SamplePoint> global_series;
  double global_benign_throughput = 0.0, global_attack_throughput = 0.0;
  double global_benign_delay_s = 0.0, global_attack_delay_s = 0.0;
  int attack_zone = -1;
  bool attack_active = false;
  double attack_start_s = 0.0;
};

namespace detail {

struct Station {
  StationConfig cfg;
  bool malicious = false;
  bool active = false;
  int cw = 16;
  int backoff = 0;
  int retries = 0;
  std::int64_t head_since_ns = 0;
};

inline std::int64_t mac_ns(double us) { return static_cast<std::int64_t>(us * 1000.0 + 0.5); }

// Simulates one interference-isolated zone. activation_ns is when the
// malicious AP (if present) starts contending; phase accounting splits at
// phase_boundary_ns.
inline ZoneMetrics simulate_zone(const MacScenario& sc, const ZoneRoster& roster,
                                 bool with_malicious, std::int64_t activation_ns,
                                 std::int64_t phase_boundary_ns) {
  const std::int64_t slot_ns = mac_ns(sc.slot_us);
  const std::int64_t payload_ns = static_cast<std::int64_t>(
      static_cast<double>(sc.payload_bytes) * 8.0 * 1e9 / sc.phy_rate_bps + 0.5);
  const std::int64_t tx_ns = payload_ns + mac_ns(sc.overhead_us);
  const std::int64_t duration_ns = static_cast<std::int64_t>(sc.sim_duration_s * 1e9 + 0.5);
  const std::int64_t sample_ns = static_cast<std::int64_t>(sc.sample_interval_s * 1e9 + 0.5);

  auto rng = seeded_engine(sc.seed ^ (0x9E3779B97F4A7C15ULL * (roster.zone_id + 1)));
  auto draw = [&rng](int cw) { return std::uniform_int_distribution<int>(0, cw - 1)(rng); };

  std::vector<Station> stations;
  auto add_honest = [&](StationRole role, int count) {
    for (int i = 0; i < count; ++i) {
      Station st;
      st.cfg = {role, sc.cw_min, sc.cw_max, sc.retry_limit, roster.zone_id};
      st.malicious = false;
      stations.push_back(st);
    }
  };
  add_honest(StationRole::VictimBs, roster.victim_bs);
  add_honest(StationRole::VictimUe, roster.victim_ue);
  add_honest(StationRole::BenignAp, roster.benign_ap);
  if (with_malicious) {
    Station st;
    st.cfg = {StationRole::MaliciousAp, sc.malicious_cw, sc.malicious_cw, sc.retry_limit,
              roster.zone_id};
    st.malicious = true;
    stations.push_back(st);
  }
  for (auto& st : stations) validate_station(st.cfg);

  ZoneMetrics zm;
  zm.zone_id = roster.zone_id;
  zm.stations.resize(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    zm.stations[i].role = stations[i].cfg.role;
    zm.stations[i].malicious = stations[i].malicious;
  }

  std::int64_t now = 0;
  bool malicious_started = false;
  // Honest stations contend from t = 0.
  for (auto& st : stations) {
    if (!st.malicious) {
      st.active = true;
      st.cw = st.cfg.cw_min;
      st.backoff = draw(st.cw);
      st.head_since_ns = 0;
    }
  }

  std::int64_t next_sample = sample_ns;
  auto bucket = [&](std::int64_t t) -> PhaseAgg& {
    return t <= phase_boundary_ns ? zm.benign : zm.attack;
  };
  auto flush_samples = [&]() {
    while (next_sample <= now && next_sample <= duration_ns) {
      SamplePoint pt;
      pt.t_s = static_cast<double>(next_sample) / 1e9;
      pt.throughput = now > 0 ? static_cast<double>(zm.total.payload_ns) / now : 0.0;
      pt.mean_delay_s = zm.total.mean_delay_s();
      pt.attack_phase = next_sample > phase_boundary_ns;
      pt.completions = zm.total.completions;
      pt.delay_sum_s = zm.total.delay_sum_s;
      zm.series.push_back(pt);
      next_sample += sample_ns;
    }
  };

  std::vector<Station*> transmitters;
  while (now < duration_ns) {
    if (with_malicious && !malicious_started && now >= activation_ns) {
      malicious_started = true;
      for (auto& st : stations) {
        if (st.malicious) {
          st.active = true;
          st.cw = st.cfg.cw_min;
          st.backoff = draw(st.cw);
          st.head_since_ns = now;
        }
      }
    }

    int min_b = std::numeric_limits<int>::max();
    int n_active = 0;
    for (const auto& st : stations) {
      if (!st.active) continue;
      ++n_active;
      min_b = std::min(min_b, st.backoff);
    }
    if (n_active == 0) {
      // Idle channel until someone can contend.
      std::int64_t jump = duration_ns;
      if (with_malicious && !malicious_started) jump = std::min(jump, activation_ns);
      zm.idle_ns += jump - now;
      now = jump;
      flush_samples();
      if (now >= duration_ns) break;
      continue;
    }

    zm.idle_ns += static_cast<std::int64_t>(min_b) * slot_ns;
    now += static_cast<std::int64_t>(min_b) * slot_ns;
    transmitters.clear();
    for (auto& st : stations) {
      if (!st.active) continue;
      st.backoff -= min_b;
      if (st.backoff == 0) transmitters.push_back(&st);
    }

    now += tx_ns;
    if (transmitters.size() == 1) {
      zm.success_ns += tx_ns;
      Station* st = transmitters.front();
      const std::size_t idx = static_cast<std::size_t>(st - stations.data());
      zm.stations[idx].payload_ns += payload_ns;
      zm.stations[idx].completions += 1;
      if (!st->malicious) {
        const double delay_s = static_cast<double>(now - st->head_since_ns) / 1e9;
        zm.stations[idx].delay_sum_s += delay_s;
        PhaseAgg& b = bucket(now);
        b.payload_ns += payload_ns;
        b.delay_sum_s += delay_s;
        b.completions += 1;
        zm.total.payload_ns += payload_ns;
        zm.total.delay_sum_s += delay_s;
        zm.total.completions += 1;
      }
      st->cw = st->cfg.cw_min;
      st->retries = 0;
      st->head_since_ns = now;
      st->backoff = draw(st->cw);
    } else {
      zm.collision_ns += tx_ns;
      for (Station* st : transmitters) {
        st->retries += 1;
        if (st->retries >= st->cfg.retry_limit) {
          const std::size_t idx = static_cast<std::size_t>(st - stations.data());
          zm.stations[idx].drops += 1;
          if (!st->malicious) {
            bucket(now).drops += 1;
            zm.total.drops += 1;
          }
          st->retries = 0;
          st->cw = st->cfg.cw_min;
          st->head_since_ns = now;  // next frame becomes head of queue
        } else {
          st->cw = std::min(st->cw * 2, st->cfg.cw_max);
        }
        st->backoff = draw(st->cw);
      }
    }
    flush_samples();
  }

  zm.elapsed_ns = now;
  zm.total.elapsed_ns = now;
  zm.benign.elapsed_ns = std::min(now, phase_boundary_ns);
  zm.attack.elapsed_ns = std::max<std::int64_t>(0, now - phase_boundary_ns);
  return zm;
}

inline Metrics run_engine(const MacScenario& sc, std::int64_t activation_ns,
                          std::int64_t phase_boundary_ns) {
  validate_scenario(sc);
  Metrics metrics;
  metrics.attack_zone = sc.attack_enabled ? sc.attack_zone : -1;
  metrics.attack_active = sc.attack_enabled;
  metrics.attack_start_s = static_cast<double>(phase_boundary_ns) / 1e9;

  for (const auto& roster : sc.zones) {
    const bool with_mal = sc.attack_enabled && roster.zone_id == sc.attack_zone;
    metrics.zones.push_back(
        simulate_zone(sc, roster, with_mal, activation_ns, phase_boundary_ns));
  }

  // Global series: equal-weight mean of zone throughputs (zones have equal
  // capacity), completion-weighted delay across zones.
  const std::size_t n_samples = metrics.zones.front().series.size();
  for (std::size_t k = 0; k < n_samples; ++k) {
    SamplePoint g;
    g.t_s = metrics.zones.front().series[k].t_s;
    g.attack_phase = metrics.zones.front().series[k].attack_phase;
    double tput = 0.0, delay_sum = 0.0;
    long long comps = 0;
    for (const auto& zm : metrics.zones) {
      tput += zm.series[k].throughput;
      delay_sum += zm.series[k].delay_sum_s;
      comps += zm.series[k].completions;
    }
    g.throughput = tput / metrics.zones.size();
    g.completions = comps;
    g.delay_sum_s = delay_sum;
    g.mean_delay_s = comps > 0 ? delay_sum / comps : 0.0;
    metrics.global_series.push_back(g);
  }

  double bt = 0.0, at = 0.0, bd = 0.0, ad = 0.0;
  long long bc = 0, ac = 0;
  for (const auto& zm : metrics.zones) {
    bt += zm.benign.throughput();
    at += zm.attack.throughput();
    bd += zm.benign.delay_sum_s;
    ad += zm.attack.delay_sum_s;
    bc += zm.benign.completions;
    ac += zm.attack.completions;
  }
  metrics.global_benign_throughput = bt / metrics.zones.size();
  metrics.global_attack_throughput = at / metrics.zones.size();
  metrics.global_benign_delay_s = bc > 0 ? bd / bc : 0.0;
  metrics.global_attack_delay_s = ac > 0 ? ad / ac : 0.0;
  return metrics;
}

}  // namespace detail

// Malicious AP (when enabled) contends for the whole run.
inline Metrics run_mac_sim(const MacScenario& sc) {
  const std::int64_t boundary = sc.attack_enabled
                                    ? 0
                                    : static_cast<std::int64_t>(sc.sim_duration_s * 1e9 + 0.5);
  return detail::run_engine(sc, 0, boundary);
}

// Malicious AP idles until attack_start_s, then contends selfishly. Running
// averages accumulate from t = 0; phase accounting splits at attack_start_s.
inline Metrics benign_vs_attack_timeline(const MacScenario& sc) {
  const std::int64_t act = static_cast<std::int64_t>(sc.attack_start_s * 1e9 + 0.5);
  const std::int64_t boundary = sc.attack_enabled
                                    ? act
                                    : static_cast<std::int64_t>(sc.sim_duration_s * 1e9 + 0.5);
  return detail::run_engine(sc, act, boundary);
}

struct ImpactReport {
  double zonal_drop_pct = 0.0;
  double global_drop_pct = 0.0;
  double zonal_delay_rise_pct = 0.0;
  double global_delay_rise_pct = 0.0;
};

// Percentage changes between the benign-phase and attack-phase metrics,
// for the attacked zone and for the whole surface.
inline ImpactReport zonal_vs_global(const Metrics& metrics) {
  if (metrics.zones.size() < 2)
    throw std::invalid_argument("zonal_vs_global: need at least 2 zones");
  ImpactReport rep;
  if (!metrics.attack_active) return rep;

  const ZoneMetrics* attacked = nullptr;
  for (const auto& zm : metrics.zones)
    if (zm.zone_id == metrics.attack_zone) attacked = &zm;
  if (attacked == nullptr) throw std::invalid_argument("zonal_vs_global: attacked zone missing");

  auto drop_pct = [](double before, double after) {
    return before > 0.0 ? 100.0 * (before - after) / before : 0.0;
  };
  auto rise_pct = [](double before, double after) {
    return before > 0.0 ? 100.0 * (after - before) / before : 0.0;
  };
  rep.zonal_drop_pct = drop_pct(attacked->benign.throughput(), attacked->attack.throughput());
  rep.global_drop_pct =
      drop_pct(metrics.global_benign_throughput, metrics.global_attack_throughput);
  rep.zonal_delay_rise_pct =
      rise_pct(attacked->benign.mean_delay_s(), attacked->attack.mean_delay_s());
  rep.global_delay_rise_pct =
      rise_pct(metrics.global_benign_delay_s, metrics.global_attack_delay_s);
  return rep;
}

}  // namespace hopmdp
