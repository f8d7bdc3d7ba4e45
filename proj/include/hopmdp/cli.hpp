#pragma once
// Command-line front end: solve | hopsim | macsim | sweep. Every command
// reads one JSON scenario config, writes canonical CSVs plus a manifest with
// per-file checksums, and is byte-reproducible from (config, seed).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hopmdp/config.hpp"
#include "hopmdp/csv.hpp"
#include "hopmdp/hop_oracle.hpp"
#include "hopmdp/mac_sim.hpp"
#include "hopmdp/model.hpp"
#include "hopmdp/solver.hpp"

namespace hopmdp {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Component sub-seeds all derive from the one root seed in the config.
inline std::uint64_t derive_seed(std::uint64_t root, const std::string& component) {
  return splitmix64(root ^ fnv1a64(component));
}

struct RunContext {
  std::filesystem::path out_dir;
  std::string config_digest;
  std::uint64_t seed = 1;
  bool quiet = false;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Manifest is written last and atomically; a manifest on disk means the run
// completed and the checksums match the listed files.
inline void write_manifest(const RunContext& ctx, const std::string& command,
                           const std::vector<std::string>& files) {
  nlohmann::json j;
  j["command"] = command;
  j["config_digest"] = ctx.config_digest;
  j["seed"] = ctx.seed;
  j["tool_version"] = kToolVersion;
  j["files"] = nlohmann::json::array();
  for (const auto& name : files) {
    const std::string bytes = read_file(ctx.out_dir / name);
    nlohmann::json f;
    f["name"] = name;
    f["bytes"] = bytes.size();
    f["fnv1a64"] = hex64(fnv1a64(bytes));
    j["files"].push_back(f);
  }
  const auto tmp = ctx.out_dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, ctx.out_dir / "manifest.json");
}

inline void say(const RunContext& ctx, const std::string& msg) {
  if (!ctx.quiet) std::cout << msg << "\n";
}

inline std::vector<std::string> state_columns(const Mdp& mdp, std::size_t si) {
  const State& s = mdp.states[si];
  return {fmt_int(static_cast<long long>(si)), fmt_int(s.location), kind_name(s.kind),
          fmt_int(s.index)};
}

}  // namespace detail

inline int cmd_solve(const ScenarioConfig& cfg, const RunContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  const Mdp mdp = build_mdp(cfg.model, cfg.surface);

  auto vi = value_iteration(mdp, cfg.solver.tol, cfg.solver.max_iter);
  if (!vi.converged)
    throw NumericError("value iteration did not converge within " +
                       std::to_string(cfg.solver.max_iter) + " iterations (residual " +
                       fmt_double(vi.residuals.back()) + ")");
  const Policy policy = extract_policy(mdp, vi.V);
  const auto chain = induced_chain(mdp, policy);
  const int start = static_cast<int>(mdp.state_index(cfg.start_zone(), Kind::H, 1));
  auto dist = stationary_distribution(chain, start);
  if (!dist.converged)
    throw NumericError("stationary distribution did not converge (residual " +
                       fmt_double(dist.residual) + ")");
  const auto sojourn = sojourn_by_location(dist, mdp.states);
  const auto summary = policy_summary(mdp, policy, dist);

  {
    CsvWriter w((ctx.out_dir / "values.csv").string(),
                {"state_id", "location", "kind", "index", "value"});
    for (std::size_t si = 0; si < mdp.size(); ++si) {
      auto cells = detail::state_columns(mdp, si);
      cells.push_back(fmt_double(vi.V.values[si]));
      w.row(cells);
    }
  }
  {
    CsvWriter w((ctx.out_dir / "policy.csv").string(),
                {"state_id", "location", "kind", "index", "action", "target"});
    for (std::size_t si = 0; si < mdp.size(); ++si) {
      const Action& a = mdp.actions[si][policy.choice[si]];
      auto cells = detail::state_columns(mdp, si);
      cells.push_back(action_name(a));
      cells.push_back(a.target >= 0 ? fmt_int(a.target) : "");
      w.row(cells);
    }
  }
  {
    CsvWriter w((ctx.out_dir / "stationary.csv").string(),
                {"state_id", "location", "kind", "index", "pi"});
    for (std::size_t si = 0; si < mdp.size(); ++si) {
      auto cells = detail::state_columns(mdp, si);
      cells.push_back(fmt_double(dist.pi[si]));
      w.row(cells);
    }
  }
  {
    CsvWriter w((ctx.out_dir / "sojourn.csv").string(), {"location", "label", "sojourn"});
    for (const auto& z : mdp.surface.zones)
      w.row({fmt_int(z.id), z.label, fmt_double(sojourn.at(z.id))});
  }
  {
    CsvWriter w((ctx.out_dir / "policy_summary.csv").string(),
                {"location", "label", "dominant_action", "dominant_target", "dominant_mass",
                 "secondary_action", "secondary_target", "secondary_mass"});
    for (const auto& zs : summary) {
      const std::string label = mdp.surface.zone(zs.zone_id).label;
      if (!zs.visited) {
        w.row({fmt_int(zs.zone_id), label, "unvisited", "", "0", "unvisited", "", "0"});
        continue;
      }
      std::vector<std::string> cells{fmt_int(zs.zone_id), label, action_name(zs.dominant),
                                     zs.dominant.target >= 0 ? fmt_int(zs.dominant.target) : "",
                                     fmt_double(zs.dominant_mass)};
      if (zs.secondary) {
        cells.push_back(action_name(*zs.secondary));
        cells.push_back(zs.secondary->target >= 0 ? fmt_int(zs.secondary->target) : "");
        cells.push_back(fmt_double(zs.secondary_mass));
      } else {
        cells.insert(cells.end(), {"", "", "0"});
      }
      w.row(cells);
    }
  }
  detail::write_manifest(ctx, "solve",
                         {"values.csv", "policy.csv", "stationary.csv", "sojourn.csv",
                          "policy_summary.csv"});
  detail::say(ctx, "solve: " + std::to_string(mdp.size()) + " states, " +
                       std::to_string(vi.iterations) + " iterations, outputs in " +
                       ctx.out_dir.string());
  return kExitOk;
}

inline int cmd_hopsim(const ScenarioConfig& cfg, const RunContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  const ModelParams& p = cfg.model;
  const long long n = cfg.oracle.n_trials;

  const auto hist = simulate_physical_sweep(p.M, p.m, n, derive_seed(cfg.seed, "sweep"));
  {
    CsvWriter w((ctx.out_dir / "sweep_hist.csv").string(), {"slot", "count", "probability"});
    for (int s = 1; s <= hist.period(); ++s)
      w.row({fmt_int(s), fmt_int(hist.counts[s - 1]), fmt_double(hist.probability(s))});
  }

  const auto drop = simulate_drop_chain(p.M, p.m, p.G, n, derive_seed(cfg.seed, "drop"));
  {
    const double se =
        std::sqrt(std::max(0.0, drop.p_empirical * (1.0 - drop.p_empirical) / drop.n_trials));
    CsvWriter w((ctx.out_dir / "drop_prob.csv").string(),
                {"n_trials", "drops", "p_empirical", "p_closed_form", "stderr"});
    w.row({fmt_int(drop.n_trials), fmt_int(drop.drops), fmt_double(drop.p_empirical),
           fmt_double(drop.p_closed_form), fmt_double(se)});
  }

  const auto gap = kernel_gap_report(p, n, derive_seed(cfg.seed, "gap"));
  {
    CsvWriter w((ctx.out_dir / "kernel_gap.csv").string(),
                {"slot", "analytic", "physical", "empirical"});
    for (const auto& g : gap)
      w.row({fmt_int(g.slot), fmt_double(g.analytic), fmt_double(g.physical),
             fmt_double(g.empirical)});
  }

  // Empirical kernel rows for the reference states under sh, at the start zone.
  const Mdp mdp = build_mdp(p, cfg.surface);
  const int zone = cfg.start_zone();
  std::vector<State> probes{{zone, Kind::P, 0},
                            {zone, Kind::H, 1},
                            {zone, Kind::H, p.K()},
                            {zone, Kind::A, 1}};
  if (p.G >= 2) probes.push_back({zone, Kind::A, p.G - 1});
  {
    CsvWriter w((ctx.out_dir / "empirical_kernel.csv").string(),
                {"location", "state", "action", "next_location", "next_state", "count",
                 "frequency", "analytic"});
    for (const auto& st : probes) {
      const int si = static_cast<int>(mdp.state_index(st.location, st.kind, st.index));
      const auto emp = empirical_transition_frequencies(
          mdp, si, 0, n, derive_seed(cfg.seed, "kernel:" + state_name(st)));
      for (const Transition& t : mdp.rows[si][0]) {
        const State& nx = mdp.states[t.next];
        w.row({fmt_int(st.location), state_name(st), "sh", fmt_int(nx.location), state_name(nx),
               fmt_int(emp.counts.count(t.next) ? emp.counts.at(t.next) : 0),
               fmt_double(emp.frequency(t.next)), fmt_double(t.prob)});
      }
    }
  }
  detail::write_manifest(ctx, "hopsim",
                         {"sweep_hist.csv", "drop_prob.csv", "kernel_gap.csv",
                          "empirical_kernel.csv"});
  detail::say(ctx, "hopsim: " + std::to_string(n) + " trials per oracle, outputs in " +
                       ctx.out_dir.string());
  return kExitOk;
}

inline int cmd_macsim(const ScenarioConfig& cfg, const RunContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  const Metrics metrics = benign_vs_attack_timeline(cfg.mac);
  const ImpactReport impact = zonal_vs_global(metrics);

  {
    CsvWriter w((ctx.out_dir / "timeseries.csv").string(),
                {"time_s", "zone", "normalized_throughput", "mean_delay_s", "phase"});
    auto phase = [](bool attack) { return attack ? std::string("attack") : std::string("benign"); };
    for (const auto& zm : metrics.zones) {
      for (const auto& pt : zm.series)
        w.row({fmt_double(pt.t_s), fmt_int(zm.zone_id), fmt_double(pt.throughput),
               fmt_double(pt.mean_delay_s), phase(pt.attack_phase)});
    }
    for (const auto& pt : metrics.global_series)
      w.row({fmt_double(pt.t_s), "global", fmt_double(pt.throughput),
             fmt_double(pt.mean_delay_s), phase(pt.attack_phase)});
  }
  {
    CsvWriter w((ctx.out_dir / "impact.csv").string(),
                {"zonal_drop_pct", "global_drop_pct", "zonal_delay_rise_pct",
                 "global_delay_rise_pct"});
    w.row({fmt_double(impact.zonal_drop_pct), fmt_double(impact.global_drop_pct),
           fmt_double(impact.zonal_delay_rise_pct), fmt_double(impact.global_delay_rise_pct)});
  }
  detail::write_manifest(ctx, "macsim", {"timeseries.csv", "impact.csv"});
  detail::say(ctx, "macsim: " + std::to_string(metrics.zones.size()) + " zones, outputs in " +
                       ctx.out_dir.string());
  return kExitOk;
}

namespace detail {

struct SweepPoint {
  double value = 0.0;
  double v_start = 0.0;
  int top_zone = 0;
  double top_share = 0.0;
  double drop_prob = 0.0;
  ImpactReport impact;
};

inline void apply_axis(ScenarioConfig& cfg, const std::string& axis, double value) {
  auto as_int = [&](const char* name) {
    const int iv = static_cast<int>(value);
    if (static_cast<double>(iv) != value)
      throw ConfigError(std::string("axis ") + name + " requires integer values");
    return iv;
  };
  if (axis == "M") cfg.model.M = as_int("M");
  else if (axis == "m") cfg.model.m = as_int("m");
  else if (axis == "q") cfg.model.q = as_int("q");
  else if (axis == "G") cfg.model.G = as_int("G");
  else if (axis == "alpha") cfg.model.alpha = value;
  else if (axis == "beta") cfg.model.beta = value;
  else if (axis == "delta") cfg.model.delta = value;
  else if (axis == "c") cfg.model.c = value;
  else if (axis == "malicious_cw") cfg.mac.malicious_cw = as_int("malicious_cw");
  else throw ConfigError("unknown sweep axis \"" + axis + "\"");
  validate_params(cfg.model);
  validate_scenario(cfg.mac);
}

}  // namespace detail

inline int cmd_sweep(const ScenarioConfig& base, const RunContext& ctx, const std::string& axis,
                     const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep: empty values list");
  std::filesystem::create_directories(ctx.out_dir);

  std::vector<detail::SweepPoint> points;
  for (double value : values) {
    ScenarioConfig cfg = base;
    detail::apply_axis(cfg, axis, value);

    detail::SweepPoint pt;
    pt.value = value;

    const Mdp mdp = build_mdp(cfg.model, cfg.surface);
    auto vi = value_iteration(mdp, cfg.solver.tol, cfg.solver.max_iter);
    if (!vi.converged) throw NumericError("sweep: value iteration did not converge");
    const Policy policy = extract_policy(mdp, vi.V);
    const int start = static_cast<int>(mdp.state_index(cfg.start_zone(), Kind::H, 1));
    auto dist = stationary_distribution(induced_chain(mdp, policy), start);
    if (!dist.converged) throw NumericError("sweep: stationary distribution did not converge");
    pt.v_start = vi.V.values[start];
    const auto sojourn = sojourn_by_location(dist, mdp.states);
    pt.top_zone = sojourn.begin()->first;
    for (const auto& [zid, share] : sojourn) {
      if (share > pt.top_share) {
        pt.top_share = share;
        pt.top_zone = zid;
      }
    }

    pt.drop_prob = 1.0;
    for (int j = 1; j <= cfg.model.G - 1; ++j)
      pt.drop_prob *= static_cast<double>(cfg.model.m) / (cfg.model.M - j);

    pt.impact = zonal_vs_global(benign_vs_attack_timeline(cfg.mac));
    points.push_back(pt);
  }

  {
    CsvWriter w((ctx.out_dir / "sweep.csv").string(),
                {"axis", "value", "v_start", "top_zone", "top_share", "drop_prob",
                 "zonal_drop_pct", "global_drop_pct"});
    for (const auto& pt : points)
      w.row({axis, fmt_double(pt.value), fmt_double(pt.v_start), fmt_int(pt.top_zone),
             fmt_double(pt.top_share), fmt_double(pt.drop_prob),
             fmt_double(pt.impact.zonal_drop_pct), fmt_double(pt.impact.global_drop_pct)});
  }
  detail::write_manifest(ctx, "sweep", {"sweep.csv"});
  detail::say(ctx, "sweep: axis " + axis + ", " + std::to_string(points.size()) +
                       " points, outputs in " + ctx.out_dir.string());
  return kExitOk;
}

// Full CLI entry point; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Mobility-powered MAC-attack analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string axis;
  std::string values_csv;
  bool quiet = false;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config JSON (defaults used if omitted)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };

  CLI::App* solve = app.add_subcommand("solve", "build and solve the attacker model");
  CLI::App* hopsim = app.add_subcommand("hopsim", "channel-hopping Monte-Carlo oracles");
  CLI::App* macsim = app.add_subcommand("macsim", "coexistence MAC simulation");
  CLI::App* sweep = app.add_subcommand("sweep", "sensitivity sweep over one scalar parameter");
  for (CLI::App* sub : {solve, hopsim, macsim, sweep}) add_common(sub);
  sweep->add_option("--axis", axis, "parameter to sweep")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "hopmdp");
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    ScenarioConfig cfg;
    std::string raw;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
      raw = detail::read_file(config_path);
    } else {
      cfg = default_config();
    }
    if (seed_given) {
      cfg.seed = seed_override;
      cfg.mac.seed = seed_override;
    }

    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.seed = cfg.seed;
    ctx.config_digest = "fnv1a64:" + hex64(fnv1a64(raw + ";seed=" + std::to_string(cfg.seed)));
    ctx.quiet = quiet;

    if (*solve) return cmd_solve(cfg, ctx);
    if (*hopsim) return cmd_hopsim(cfg, ctx);
    if (*macsim) return cmd_macsim(cfg, ctx);
    if (*sweep) {
      std::vector<double> values;
      std::stringstream ss(values_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
          values.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError("sweep: bad value \"" + item + "\"");
        }
      }
      return cmd_sweep(cfg, ctx, axis, values);
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace hopmdp
