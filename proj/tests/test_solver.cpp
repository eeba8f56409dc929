// Copyright 2026 The posgsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.h"
#include "posgsolve/cdit.h"
#include "posgsolve/errors.h"
#include "posgsolve/model.h"
#include "posgsolve/normal_form.h"
#include "posgsolve/solver.h"

using namespace posg;

TEST_CASE("regret matching normalizes positive regrets or falls back uniform") {
  const std::vector<double> mixed{3.0, -1.0, 1.0};
  const std::vector<double> probs = regret_matching(mixed);
  CHECK(probs[0] == doctest::Approx(0.75));
  CHECK(probs[1] == doctest::Approx(0.0));
  CHECK(probs[2] == doctest::Approx(0.25));

  const std::vector<double> hopeless{-2.0, -0.5};
  const std::vector<double> uniform = regret_matching(hopeless);
  CHECK(uniform[0] == doctest::Approx(0.5));
  CHECK(uniform[1] == doctest::Approx(0.5));

  const std::vector<double> zeroes{0.0, 0.0, 0.0, 0.0};
  for (const double p : regret_matching(zeroes)) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("matrix regret matching drives pennies toward the mixed equilibrium") {
  const NormalFormGame pennies = matching_pennies_matrix();
  const MatrixRmResult result =
      normal_form_regret_matching(pennies, 20000, {100, 20000});
  CHECK(result.nashconv_trace.size() == 2);
  CHECK(result.nashconv_trace[0].first == 100);
  CHECK(result.nashconv_trace[1].first == 20000);
  CHECK(result.nashconv_trace[1].second < result.nashconv_trace[0].second);
  CHECK(nashconv(pennies, result.average) < 0.02);
  for (int p = 0; p < kNumPlayers; ++p) {
    double total = 0;
    for (const double w : result.average[p]) total += w;
    CHECK(total == doctest::Approx(1.0));
  }
  // Deterministic dynamics: a rerun reproduces the trace exactly.
  const MatrixRmResult rerun =
      normal_form_regret_matching(pennies, 20000, {100, 20000});
  CHECK(rerun.nashconv_trace[1].second == result.nashconv_trace[1].second);
}

TEST_CASE("matrix regret matching handles rock-paper-scissors") {
  const NormalFormGame rps = rock_paper_scissors_matrix();
  const MatrixRmResult result = normal_form_regret_matching(rps, 20000, {});
  CHECK(nashconv(rps, result.average) < 0.02);
  for (const double w : result.average[0]) CHECK(w == doctest::Approx(1.0 / 3).epsilon(0.1));
}

TEST_CASE("full-width regret minimization is a fixpoint at the pennies equilibrium") {
  OracleGame game(make_matching_pennies_game());
  const VanillaCfrResult result = vanilla_cfr_exact(game, 50);
  const ExactEvaluator evaluator(game);
  // From the uniform start, expected regrets are exactly zero so the profile
  // never moves off the equilibrium.
  CHECK(evaluator.nashconv(result.average_policies) == doctest::Approx(0.0));
  const auto root_probs = result.average_policies[0].probs(InfoSetKey{0, {}});
  CHECK(root_probs[0] == doctest::Approx(0.5));
}

TEST_CASE("full-width regret minimization solves the signal duel") {
  OracleGame game(make_signal_duel());
  const VanillaCfrResult result = vanilla_cfr_exact(game, 2000);
  const ExactEvaluator evaluator(game);
  const double gap = evaluator.nashconv(result.average_policies);
  CHECK(gap < 0.05);
  // Policies carry one entry per reachable private history: 1 + 4 per player.
  CHECK(result.average_policies[0].size() == 5);
  CHECK(result.average_policies[1].size() == 5);
}

TEST_CASE("full-width solver refuses oversized joint-history trees") {
  const OracleTables big = make_random_game(2, 3, 3, 6, 0.9, 3);
  OracleGame game(big);
  CHECK_THROWS_AS(vanilla_cfr_exact(game, 1, 1000), EnumerationTooLargeError);
}

TEST_CASE("external sampling solves pennies on a trivial-chance tree") {
  auto game = std::make_shared<OracleGame>(make_matching_pennies_game());
  Rng rng(5);
  Cdit tree(game, {.particles = 1, .cache_bytes = 16u << 20}, rng);
  EscfrSolver solver(&tree);
  for (int t = 0; t < 4000; ++t) solver.iterate(rng);
  CHECK(solver.iteration_count() == 4000);
  CHECK(solver.nodes_touched() > 0);
  const auto policies = solver.average_policies();
  const ExactEvaluator evaluator(*game);
  CHECK(evaluator.nashconv(policies) < 0.08);
  const auto probs = policies[0].probs(InfoSetKey{0, {}});
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("external sampling approaches the duel equilibrium on a sampled tree") {
  auto game = std::make_shared<OracleGame>(make_signal_duel());
  Rng rng(404);
  Cdit tree(game, {.particles = 128, .cache_bytes = 256u << 20}, rng);
  EscfrSolver solver(&tree);
  for (int t = 0; t < 20000; ++t) solver.iterate(rng);
  const ExactEvaluator evaluator(*game);
  const double gap = evaluator.nashconv(solver.average_policies());
  // Unit-level smoke bound; the acceptance suite pins the strict one.
  CHECK(gap < 0.15);
  // The current (last-iterate) policy exists for every touched history.
  const BehaviorPolicy current = solver.current_policy(0);
  CHECK(current.size() >= 1);
}

TEST_CASE("solver snapshots record the requested iterations in order") {
  auto game = std::make_shared<OracleGame>(make_signal_duel());
  Rng rng(6);
  Cdit tree(game, {.particles = 16, .cache_bytes = 64u << 20}, rng);
  EscfrOptions options;
  options.iterations = 50;
  options.snapshot_iterations = {1, 10, 50};
  const SolveReport report = solve_escfr(tree, options, rng);
  CHECK(report.iterations == 50);
  REQUIRE(report.snapshots.size() == 3);
  CHECK(report.snapshots[0].iteration == 1);
  CHECK(report.snapshots[1].iteration == 10);
  CHECK(report.snapshots[2].iteration == 50);
  // The last snapshot is the final average.
  for (int p = 0; p < kNumPlayers; ++p) {
    CHECK(report.snapshots[2].policies[p].sorted_entries() ==
          report.policies[p].sorted_entries());
  }
}

TEST_CASE("identically seeded solves produce identical policies") {
  auto game = std::make_shared<OracleGame>(make_signal_duel());
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    Cdit tree(game, {.particles = 32, .cache_bytes = 64u << 20}, rng);
    EscfrOptions options;
    options.iterations = 500;
    return solve_escfr(tree, options, rng);
  };
  const SolveReport a = run(2718);
  const SolveReport b = run(2718);
  const SolveReport c = run(2719);
  for (int p = 0; p < kNumPlayers; ++p) {
    CHECK(a.policies[p].sorted_entries() == b.policies[p].sorted_entries());
  }
  CHECK(a.nodes_touched == b.nodes_touched);
  // A different seed draws a different tree and different samples.
  CHECK(a.policies[0].sorted_entries() != c.policies[0].sorted_entries());
}

TEST_CASE("terminal leaves stop traversal immediately") {
  TagParams params;
  params.capture_radius = 5.0;
  auto game = std::make_shared<TagGame>(params);
  Rng rng(7);
  Cdit tree(game, {.particles = 4, .cache_bytes = 16u << 20}, rng);
  EscfrSolver solver(&tree);
  solver.iterate(rng);
  // Only root histories can accumulate strategy: every child absorbs.
  const auto policies = solver.average_policies();
  CHECK(policies[0].size() == 1);
  CHECK(policies[1].size() == 1);
  CHECK(policies[0].find(InfoSetKey{0, {}}) != nullptr);
}

TEST_CASE("average policies are well-formed distributions") {
  auto game = std::make_shared<OracleGame>(make_signal_duel());
  Rng rng(8);
  Cdit tree(game, {.particles = 8, .cache_bytes = 16u << 20}, rng);
  EscfrSolver solver(&tree);
  for (int t = 0; t < 200; ++t) solver.iterate(rng);
  for (int p = 0; p < kNumPlayers; ++p) {
    for (const auto& [key, probs] : solver.average_policies()[p].sorted_entries()) {
      CHECK(key.player == p);
      double total = 0;
      for (const double v : probs) {
        CHECK(v >= 0.0);
        total += v;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}
