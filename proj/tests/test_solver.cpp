#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hopmdp/solver.hpp"

using namespace hopmdp;

namespace {

// Minimal hand-built MDPs for solver contracts.
Mdp self_loop(double reward, double discount) {
  Mdp mdp;
  mdp.discount = discount;
  mdp.states = {{0, Kind::H, 1}};
  mdp.actions = {{{Action::Type::SH, -1}}};
  mdp.rows = {{{{0, 1.0, reward}}}};
  return mdp;
}

ModelParams fig7_params() { return ModelParams{}; }

Surface fig7_surface() { return build_hex7({1, 1, 1, 1, 2, 3, 7}); }

}  // namespace

TEST_CASE("value iteration: geometric series on a self-loop", "[solver]") {
  auto res = value_iteration(self_loop(3.0, 0.9), 1e-13, 100000);
  REQUIRE(res.converged);
  CHECK(res.V.values[0] == Catch::Approx(30.0).margin(1e-9));
}

TEST_CASE("value iteration with delta = 0 returns the best immediate reward", "[solver]") {
  Mdp mdp;
  mdp.discount = 0.0;
  mdp.states = {{0, Kind::H, 1}, {0, Kind::H, 2}};
  mdp.actions.resize(2);
  mdp.rows.resize(2);
  // State 0: action a0 pays 0.25 expected, action a1 pays 0.2.
  mdp.actions[0] = {{Action::Type::SH, -1}, {Action::Type::MS, 1}};
  mdp.rows[0] = {{{0, 0.5, 1.0}, {1, 0.5, -0.5}}, {{1, 1.0, 0.2}}};
  mdp.actions[1] = {{Action::Type::SH, -1}};
  mdp.rows[1] = {{{1, 1.0, -1.0}}};

  auto res = value_iteration(mdp, 1e-12, 1000);
  REQUIRE(res.converged);
  CHECK(res.V.values[0] == Catch::Approx(0.25));
  CHECK(res.V.values[1] == Catch::Approx(-1.0));
}

TEST_CASE("value iteration residuals contract at rate delta", "[solver]") {
  Mdp mdp = build_mdp(fig7_params(), fig7_surface());
  auto res = value_iteration(mdp, 1e-12, 100000);
  REQUIRE(res.converged);
  for (std::size_t k = 0; k + 1 < res.residuals.size(); ++k)
    CHECK(res.residuals[k + 1] <= mdp.discount * res.residuals[k] + 1e-9);
}

TEST_CASE("non-convergence is reported, not thrown", "[solver]") {
  auto res = value_iteration(self_loop(1.0, 0.99), 1e-12, 3);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 3);
  CHECK(res.residuals.back() > 1e-12);
}

TEST_CASE("extract_policy: ties resolve to the earliest action in order", "[solver]") {
  Mdp mdp;
  mdp.discount = 0.5;
  mdp.states = {{0, Kind::H, 1}};
  mdp.actions = {{{Action::Type::SH, -1}, {Action::Type::MH, 1}}};
  mdp.rows = {{{{0, 1.0, 1.0}}, {{0, 1.0, 1.0}}}};  // exactly equal backups
  auto res = value_iteration(mdp, 1e-12, 10000);
  Policy pol = extract_policy(mdp, res.V);
  CHECK(pol.choice[0] == 0);  // sh wins the tie
  CHECK(mdp.actions[0][pol.choice[0]].type == Action::Type::SH);
}

TEST_CASE("extract_policy is idempotent on the converged value function", "[solver]") {
  Mdp mdp = build_mdp(fig7_params(), fig7_surface());
  auto res = value_iteration(mdp, 1e-12, 100000);
  Policy a = extract_policy(mdp, res.V);
  Policy b = extract_policy(mdp, res.V);
  CHECK(a.choice == b.choice);
}

TEST_CASE("policy argmax is invariant under positive reward scaling", "[solver]") {
  ModelParams p = fig7_params();
  Mdp mdp = build_mdp(p, fig7_surface());
  auto res = value_iteration(mdp, 1e-12, 100000);
  Policy base = extract_policy(mdp, res.V);

  ModelParams scaled = p;
  scaled.reward_attack *= 2.0;
  scaled.reward_drop *= 2.0;
  scaled.cost_busy *= 2.0;
  scaled.cost_move *= 2.0;
  scaled.cost_hop *= 2.0;
  scaled.cost_detect *= 2.0;
  scaled.penalty_forbidden *= 2.0;
  Mdp mdp2 = build_mdp(scaled, fig7_surface());
  auto res2 = value_iteration(mdp2, 1e-12, 100000);
  Policy doubled = extract_policy(mdp2, res2.V);

  CHECK(base.choice == doubled.choice);
}

TEST_CASE("induced chain is row-stochastic; deterministic cycles give permutations",
          "[solver]") {
  Mdp mdp = build_mdp(fig7_params(), fig7_surface());
  auto res = value_iteration(mdp, 1e-10, 100000);
  Policy pol = extract_policy(mdp, res.V);
  auto chain = induced_chain(mdp, pol);
  for (const auto& row : chain) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }

  Mdp cycle;
  cycle.discount = 0.9;
  cycle.states = {{0, Kind::H, 1}, {0, Kind::H, 2}};
  cycle.actions = {{{Action::Type::SH, -1}}, {{Action::Type::SH, -1}}};
  cycle.rows = {{{{1, 1.0, 0.0}}}, {{{0, 1.0, 0.0}}}};
  auto perm = induced_chain(cycle, Policy{{0, 0}});
  CHECK(perm[0][1] == 1.0);
  CHECK(perm[1][0] == 1.0);
  CHECK(perm[0][0] == 0.0);
}

TEST_CASE("stationary distribution solves the balance equations", "[solver]") {
  // pi(0) * 0.3 = pi(1) * 0.6 and pi sums to 1 -> (2/3, 1/3).
  std::vector<std::vector<double>> chain = {{0.7, 0.3}, {0.6, 0.4}};
  auto dist = stationary_distribution(chain, 0);
  REQUIRE(dist.converged);
  CHECK(dist.pi[0] == Catch::Approx(2.0 / 3.0).margin(1e-10));
  CHECK(dist.pi[1] == Catch::Approx(1.0 / 3.0).margin(1e-10));
  CHECK(dist.recurrent_class == std::vector<int>{0, 1});
}

TEST_CASE("stationary distribution of a period-2 cycle", "[solver]") {
  std::vector<std::vector<double>> chain = {{0.0, 1.0}, {1.0, 0.0}};
  auto dist = stationary_distribution(chain, 0);
  REQUIRE(dist.converged);
  CHECK(dist.pi[0] == Catch::Approx(0.5).margin(1e-10));
  CHECK(dist.pi[1] == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("doubly stochastic irreducible chains have uniform pi", "[solver]") {
  std::vector<std::vector<double>> chain = {
      {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}, {0.5, 0.3, 0.2}};
  auto dist = stationary_distribution(chain, 1);
  REQUIRE(dist.converged);
  for (double v : dist.pi) CHECK(v == Catch::Approx(1.0 / 3.0).margin(1e-10));
}

TEST_CASE("transient states carry zero stationary mass", "[solver]") {
  // 0 is transient: it leaks into the closed class {1, 2}.
  std::vector<std::vector<double>> chain = {
      {0.5, 0.5, 0.0}, {0.0, 0.3, 0.7}, {0.0, 0.6, 0.4}};
  auto dist = stationary_distribution(chain, 0);
  REQUIRE(dist.converged);
  CHECK(dist.pi[0] == 0.0);
  CHECK(dist.recurrent_class == std::vector<int>{1, 2});
  CHECK(dist.pi[1] + dist.pi[2] == Catch::Approx(1.0).margin(1e-12));

  // pi is a fixed point: ||pi P - pi||_1 small.
  double res = 0.0;
  for (int j = 0; j < 3; ++j) {
    double pj = 0.0;
    for (int i = 0; i < 3; ++i) pj += dist.pi[i] * chain[i][j];
    res += std::abs(pj - dist.pi[j]);
  }
  CHECK(res < 1e-8);
}

TEST_CASE("sojourn per location", "[solver]") {
  SECTION("single zone gets everything") {
    ModelParams p = fig7_params();
    Surface single = make_surface({{0, 1.0, "Z0"}}, {});
    Mdp mdp = build_mdp(p, single);
    auto res = value_iteration(mdp, 1e-12, 100000);
    Policy pol = extract_policy(mdp, res.V);
    auto dist = stationary_distribution(induced_chain(mdp, pol),
                                        static_cast<int>(mdp.state_index(0, Kind::H, 1)));
    REQUIRE(dist.converged);
    auto soj = sojourn_by_location(dist, mdp.states);
    REQUIRE(soj.size() == 1);
    CHECK(soj.at(0) == Catch::Approx(1.0).margin(1e-10));
  }

  SECTION("equal weights: ring zones are symmetric") {
    // With a weak IDS (large c) staying put dominates every move action, the
    // policy is rotation-equivariant and the six ring zones split the
    // off-center mass equally.
    ModelParams p = fig7_params();
    p.c = 50.0;
    Surface hex = build_hex7({1, 1, 1, 1, 1, 1, 1});
    Mdp mdp = build_mdp(p, hex);
    auto res = value_iteration(mdp, 1e-13, 200000);
    REQUIRE(res.converged);
    Policy pol = extract_policy(mdp, res.V);
    auto dist = stationary_distribution(induced_chain(mdp, pol),
                                        static_cast<int>(mdp.state_index(1, Kind::H, 1)), 1e-13,
                                        1000000);
    REQUIRE(dist.converged);
    auto soj = sojourn_by_location(dist, mdp.states);
    double total = 0.0;
    for (const auto& [zid, share] : soj) total += share;
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
    for (int id = 2; id <= 6; ++id)
      CHECK(soj.at(id) == Catch::Approx(soj.at(1)).margin(1e-8));
  }
}

TEST_CASE("policy summary ranks actions by stationary mass", "[solver]") {
  ModelParams p = fig7_params();
  p.c = 50.0;  // staying dominates: every zone should be pure sh
  Surface hex = build_hex7({1, 1, 1, 1, 1, 1, 1});
  Mdp mdp = build_mdp(p, hex);
  auto res = value_iteration(mdp, 1e-12, 200000);
  Policy pol = extract_policy(mdp, res.V);
  auto dist = stationary_distribution(induced_chain(mdp, pol),
                                      static_cast<int>(mdp.state_index(1, Kind::H, 1)));
  REQUIRE(dist.converged);
  auto summary = policy_summary(mdp, pol, dist);
  REQUIRE(summary.size() == 7);
  for (const auto& zs : summary) {
    if (!zs.visited) continue;
    CHECK(zs.dominant.type == Action::Type::SH);
    CHECK_FALSE(zs.secondary.has_value());
  }
}

TEST_CASE("policy summary flags unvisited zones", "[solver]") {
  // Two zones, policy keeps the chain inside zone 0 (sh everywhere and the
  // degenerate D reset), so zone 1 never acquires mass.
  ModelParams p = fig7_params();
  Surface pair = make_surface({{0, 1.0, "Z0"}, {1, 1.0, "Z1"}}, {{0, 1}});
  Mdp mdp = build_mdp(p, pair);
  Policy stay;
  stay.choice.assign(mdp.size(), 0);  // sh for non-D, forced reloc for D
  auto dist = stationary_distribution(induced_chain(mdp, stay),
                                      static_cast<int>(mdp.state_index(0, Kind::H, 1)));
  REQUIRE(dist.converged);
  auto summary = policy_summary(mdp, stay, dist);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].visited);
  // D in zone 0 relocates to zone 1's H_1, so zone 1 is visited here.
  CHECK(summary[1].visited);

  // A summary over a distribution concentrated on zone 0 flags zone 1.
  StationaryDistribution point;
  point.pi.assign(mdp.size(), 0.0);
  point.pi[mdp.state_index(0, Kind::P)] = 1.0;
  point.converged = true;
  auto summary2 = policy_summary(mdp, stay, point);
  CHECK(summary2[0].visited);
  CHECK_FALSE(summary2[1].visited);
}

TEST_CASE("rollout value check", "[solver]") {
  SECTION("self-loop geometric series") {
    Mdp mdp = self_loop(1.0, 0.9);
    auto stats = rollout_value_check(mdp, Policy{{0}}, 0, 500, 200, 42);
    CHECK(stats.mean == Catch::Approx(10.0).margin(1e-9));
    CHECK(stats.stddev == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("delta = 0 averages first-step rewards") {
    Mdp mdp;
    mdp.discount = 0.0;
    mdp.states = {{0, Kind::H, 1}, {0, Kind::H, 2}};
    mdp.actions = {{{Action::Type::SH, -1}}, {{Action::Type::SH, -1}}};
    mdp.rows = {{{{0, 0.5, 1.0}, {1, 0.5, 0.0}}}, {{{1, 1.0, 5.0}}}};
    auto stats = rollout_value_check(mdp, Policy{{0, 0}}, 0, 200, 20000, 7);
    CHECK(stats.mean == Catch::Approx(0.5).margin(4.0 * stats.stderr_mean + 1e-12));
  }
  SECTION("hex7: rollout agrees with the value function within 3 sigma") {
    Mdp mdp = build_mdp(fig7_params(), fig7_surface());
    auto res = value_iteration(mdp, 1e-12, 200000);
    REQUIRE(res.converged);
    Policy pol = extract_policy(mdp, res.V);
    const int start = static_cast<int>(mdp.state_index(1, Kind::H, 1));
    auto stats = rollout_value_check(mdp, pol, start, 500, 20000, 20240803);
    CHECK(std::abs(stats.mean - res.V.values[start]) <= 3.0 * stats.stderr_mean);
  }
  SECTION("rollouts are reproducible for a fixed seed") {
    Mdp mdp = build_mdp(fig7_params(), fig7_surface());
    Policy pol;
    pol.choice.assign(mdp.size(), 0);
    auto a = rollout_value_check(mdp, pol, 0, 50, 500, 99);
    auto b = rollout_value_check(mdp, pol, 0, 50, 500, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
  }
}
