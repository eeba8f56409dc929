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

#include "posgsolve/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "posgsolve/belief.h"
#include "posgsolve/errors.h"
#include "posgsolve/exploitability.h"
#include "posgsolve/normal_form.h"
#include "posgsolve/solver.h"
#include "posgsolve/stats.h"

namespace posg {
namespace {

namespace fs = std::filesystem;

std::string format_g9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void write_file_header(std::ostream& out, const ExperimentConfig& config,
                       const std::string& seed_label) {
  out << "# posgsolve " << kToolVersion << " config=" << config.hash()
      << " seed=" << seed_label << "\n";
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads; rethrows the first
// worker exception.
template <typename Fn>
void parallel_indexed(std::size_t count, int jobs, Fn fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::size_t>(count, static_cast<std::size_t>(jobs)));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string policy_file_name(std::uint64_t seed, std::int64_t snapshot_iter) {
  std::ostringstream out;
  out << "policy_s" << seed << "_t" << snapshot_iter << ".policy";
  return out.str();
}

std::string solve_report_file_name(std::uint64_t seed) {
  std::ostringstream out;
  out << "solve_report_s" << seed << ".txt";
  return out.str();
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

SolveRunResult run_solve(const ExperimentConfig& config, int jobs, bool dump_tree) {
  config.validate();
  const std::shared_ptr<Model> model = make_model(config);
  const std::vector<std::uint64_t> seeds = config.seeds();
  const std::vector<std::int64_t> schedule = config.snapshot_schedule();
  fs::create_directories(config.output_dir);

  SolveRunResult result;
  std::mutex result_mutex;
  parallel_indexed(seeds.size(), jobs, [&](std::size_t index) {
    const std::uint64_t seed = seeds[index];
    std::vector<fs::path> expected;
    for (std::int64_t snap : schedule) {
      expected.push_back(fs::path(config.output_dir) / policy_file_name(seed, snap));
    }
    expected.push_back(fs::path(config.output_dir) / solve_report_file_name(seed));
    const bool complete = std::all_of(expected.begin(), expected.end(),
                                      [](const fs::path& p) { return fs::exists(p); });
    if (complete) {
      std::lock_guard<std::mutex> lock(result_mutex);
      result.skipped_seeds.push_back(seed);
      return;
    }

    Rng rng(seed);
    Cdit::Options options;
    options.particles = config.particles;
    options.cache_bytes = config.cache_mb << 20;
    options.registry = config.registry;
    Cdit tree(model, options, rng);

    EscfrOptions solve_options;
    solve_options.iterations = config.iterations;
    solve_options.snapshot_iterations = schedule;
    const SolveReport report = solve_escfr(tree, solve_options, rng);

    std::vector<std::string> files;
    for (const EscfrSnapshot& snapshot : report.snapshots) {
      PolicyFileHeader header;
      header.tool_version = kToolVersion;
      header.config_hash = config.hash();
      header.model = model->name();
      header.particles = config.particles;
      header.horizon = model->spec().horizon;
      header.iterations = config.iterations;
      header.snapshot = snapshot.iteration;
      header.seed = seed;
      const fs::path path =
          fs::path(config.output_dir) / policy_file_name(seed, snapshot.iteration);
      save_policy_file(path.string(), header, snapshot.policies);
      files.push_back(path.string());
    }

    const fs::path report_path =
        fs::path(config.output_dir) / solve_report_file_name(seed);
    {
      std::ofstream out(report_path);
      if (!out) throw Error("cannot write " + report_path.string());
      write_file_header(out, config, std::to_string(seed));
      out << "model=" << model->name() << "\n";
      out << "particles=" << config.particles << "\n";
      out << "horizon=" << model->spec().horizon << "\n";
      out << "iterations=" << report.iterations << "\n";
      out << "nodes_touched=" << report.nodes_touched << "\n";
      out << "cache_bytes_used=" << tree.cache_bytes_used() << "\n";
      out << "generations=" << tree.generation_count() << "\n";
      out << "snapshots=";
      for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
        out << (i ? "," : "") << report.snapshots[i].iteration;
      }
      out << "\n";
    }
    files.push_back(report_path.string());

    if (dump_tree) {
      const fs::path tree_path =
          fs::path(config.output_dir) / ("tree_s" + std::to_string(seed) + ".txt");
      std::ofstream out(tree_path);
      if (!out) throw Error("cannot write " + tree_path.string());
      write_file_header(out, config, std::to_string(seed));
      tree.dump(out, std::min(2, model->spec().horizon));
      files.push_back(tree_path.string());
    }

    std::lock_guard<std::mutex> lock(result_mutex);
    result.solved_seeds.push_back(seed);
    result.files.insert(result.files.end(), files.begin(), files.end());
  });

  std::sort(result.solved_seeds.begin(), result.solved_seeds.end());
  std::sort(result.skipped_seeds.begin(), result.skipped_seeds.end());
  std::sort(result.files.begin(), result.files.end());
  return result;
}

// ---------------------------------------------------------------------------
// exploitability
// ---------------------------------------------------------------------------

ExploitRunResult run_exploitability(const ExperimentConfig& config, int jobs) {
  config.validate();
  const std::shared_ptr<Model> model = make_model(config);
  const std::vector<std::uint64_t> seeds = config.seeds();
  const std::vector<std::int64_t> schedule = config.snapshot_schedule();

  std::vector<std::uint64_t> missing;
  for (std::uint64_t seed : seeds) {
    for (std::int64_t snap : schedule) {
      if (!fs::exists(fs::path(config.output_dir) / policy_file_name(seed, snap))) {
        missing.push_back(seed);
        break;
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream message;
    message << "missing solve artifacts for seeds:";
    for (std::uint64_t seed : missing) message << " " << seed;
    throw Error(message.str());
  }

  struct Row {
    std::int64_t snapshot = 0;
    std::uint64_t seed = 0;
    ExploitabilityPoint point;
  };
  std::vector<Row> rows(seeds.size() * schedule.size());
  parallel_indexed(rows.size(), jobs, [&](std::size_t index) {
    const std::uint64_t seed = seeds[index / schedule.size()];
    const std::int64_t snap = schedule[index % schedule.size()];
    const fs::path path = fs::path(config.output_dir) / policy_file_name(seed, snap);
    const LoadedPolicy loaded = load_policy_file(path.string());
    Rng rng(rnd::combine(seed, static_cast<std::uint64_t>(snap)));
    rows[index] = {snap, seed,
                   estimate_exploitability(model, loaded.policies, config.pomcp,
                                           config.episodes, rng, snap)};
  });

  ExploitRunResult result;
  const fs::path raw_path = fs::path(config.output_dir) / "exploitability_raw.csv";
  {
    std::ofstream out(raw_path);
    if (!out) throw Error("cannot write " + raw_path.string());
    write_file_header(out, config, "all");
    out << "snapshot_iter,seed,e_pursuer,e_evader,nashconv\n";
    for (std::int64_t snap : schedule) {
      for (std::uint64_t seed : seeds) {
        const auto it =
            std::find_if(rows.begin(), rows.end(), [&](const Row& row) {
              return row.snapshot == snap && row.seed == seed;
            });
        out << snap << "," << seed << ","
            << format_g9(it->point.exploitability[0]) << ","
            << format_g9(it->point.exploitability[1]) << ","
            << format_g9(it->point.nashconv) << "\n";
      }
    }
  }
  result.raw_csv_path = raw_path.string();

  const fs::path agg_path = fs::path(config.output_dir) / "exploitability_agg.csv";
  {
    std::ofstream out(agg_path);
    if (!out) throw Error("cannot write " + agg_path.string());
    write_file_header(out, config, "all");
    out << "snapshot_iter,mean_nashconv,se3_nashconv,n_seeds\n";
    for (std::int64_t snap : schedule) {
      std::vector<double> values;
      for (const Row& row : rows) {
        if (row.snapshot == snap) values.push_back(row.point.nashconv);
      }
      out << snap << "," << format_g9(stats::mean(values)) << ","
          << format_g9(3.0 * stats::standard_error(values)) << "," << values.size()
          << "\n";
    }
  }
  result.aggregate_csv_path = agg_path.string();
  return result;
}

// ---------------------------------------------------------------------------
// policy marginals
// ---------------------------------------------------------------------------

namespace {

// Exact P(own action sequence) on a tabular model: sums over the opponent's
// actions and all chance outcomes with the sequence's actions forced.
double exact_sequence_probability(const OracleGame& game,
                                  const std::array<BehaviorPolicy, 2>& policies,
                                  int player, const std::vector<int>& sequence) {
  const PosgSpec& spec = game.spec();
  const int opponent = 1 - player;
  struct Walker {
    const OracleGame& game;
    const PosgSpec& spec;
    const std::array<BehaviorPolicy, 2>& policies;
    int player;
    int opponent;
    const std::vector<int>& sequence;

    double walk(int state, InfoSetKey& own, InfoSetKey& opp, int stage) {
      if (stage >= spec.horizon) return 1.0;
      const int own_action = sequence[stage];
      const double p_own = policies[player].probs(own)[own_action];
      if (p_own == 0) return 0;
      if (stage + 1 >= spec.horizon) return p_own;
      const std::vector<double> opp_probs = policies[opponent].probs(opp);
      double total = 0;
      for (int opp_action = 0; opp_action < spec.action_counts[opponent];
           ++opp_action) {
        if (opp_probs[opp_action] == 0) continue;
        JointAction joint;
        joint[player] = own_action;
        joint[opponent] = opp_action;
        const int code = joint_action_code(spec, joint);
        for (int next = 0; next < game.num_states(); ++next) {
          const double p_next = game.transition_prob(state, code, next);
          if (p_next == 0) continue;
          for (int own_obs = 0; own_obs < spec.observation_counts[player];
               ++own_obs) {
            const double p_own_obs =
                game.observation_prob(player, code, next, own_obs);
            if (p_own_obs == 0) continue;
            for (int opp_obs = 0; opp_obs < spec.observation_counts[opponent];
                 ++opp_obs) {
              const double p_opp_obs =
                  game.observation_prob(opponent, code, next, opp_obs);
              if (p_opp_obs == 0) continue;
              own.steps.emplace_back(own_action, own_obs);
              opp.steps.emplace_back(opp_action, opp_obs);
              total += opp_probs[opp_action] * p_next * p_own_obs * p_opp_obs *
                       walk(next, own, opp, stage + 1);
              own.steps.pop_back();
              opp.steps.pop_back();
            }
          }
        }
      }
      return p_own * total;
    }
  } walker{game, spec, policies, player, opponent, sequence};

  double probability = 0;
  const std::vector<double>& b0 = game.initial_belief();
  InfoSetKey own{player, {}};
  InfoSetKey opp{opponent, {}};
  for (int s = 0; s < game.num_states(); ++s) {
    if (b0[s] == 0) continue;
    probability += b0[s] * walker.walk(s, own, opp, 0);
  }
  return probability;
}

// Monte Carlo P(sequence): forces the sequence, samples everything else, and
// averages the product of the policy's probabilities of the forced actions.
double sampled_sequence_probability(const Model& model,
                                    const std::array<BehaviorPolicy, 2>& policies,
                                    int player, const std::vector<int>& sequence,
                                    int samples, std::uint64_t seed) {
  const PosgSpec& spec = model.spec();
  const int opponent = 1 - player;
  std::vector<double> weights(samples, 0.0);
  for (int i = 0; i < samples; ++i) {
    Rng rng(rnd::combine(seed, static_cast<std::uint64_t>(i)));
    State state = model.sample_initial_state(rng);
    InfoSetKey own{player, {}};
    InfoSetKey opp{opponent, {}};
    double weight = 1;
    for (int t = 0; t < spec.horizon; ++t) {
      if (model.is_terminal(state)) break;
      weight *= policies[player].probs(own)[sequence[t]];
      if (weight == 0) break;
      JointAction joint;
      joint[player] = sequence[t];
      joint[opponent] = policies[opponent].sample_action(opp, rng);
      const GenerativeStep step = model.step(state, joint, rng);
      if (step.terminal || t + 1 >= spec.horizon) break;
      own.steps.emplace_back(joint[player], step.observation[player]);
      opp.steps.emplace_back(joint[opponent], step.observation[opponent]);
      state = step.next_state;
    }
    weights[i] = weight;
  }
  return stats::mean(weights);
}

}  // namespace

std::string run_policy_marginal(const ExperimentConfig& config,
                                const std::string& policy_path) {
  config.validate();
  const std::shared_ptr<Model> model = make_model(config);
  const LoadedPolicy loaded = load_policy_file(policy_path);
  const PosgSpec& spec = model->spec();
  const auto* oracle = dynamic_cast<const OracleGame*>(model.get());
  const auto* tag = dynamic_cast<const TagGame*>(model.get());
  fs::create_directories(config.output_dir);
  const fs::path out_path = fs::path(config.output_dir) / "policy_marginal.csv";
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path.string());
  write_file_header(out, config, std::to_string(loaded.header.seed));
  out << "player,sequence,probability,dx,dy\n";

  constexpr std::int64_t kSequenceGuard = 100000;
  constexpr int kScoringSamples = 256;
  for (int player = 0; player < kNumPlayers; ++player) {
    const int num_actions = spec.action_counts[player];
    double count = 1;
    for (int t = 0; t < spec.horizon; ++t) count *= num_actions;
    if (count > static_cast<double>(kSequenceGuard)) {
      throw EnumerationTooLargeError(
          "action sequence count exceeds guard for player " +
          std::to_string(player + 1));
    }
    const std::int64_t total = static_cast<std::int64_t>(count);
    std::vector<double> probabilities(total, 0.0);
    std::vector<int> sequence(spec.horizon, 0);
    for (std::int64_t index = 0; index < total; ++index) {
      std::int64_t digits = index;
      for (int t = 0; t < spec.horizon; ++t) {
        sequence[t] = static_cast<int>(digits % num_actions);
        digits /= num_actions;
      }
      probabilities[index] =
          oracle ? exact_sequence_probability(*oracle, loaded.policies, player,
                                              sequence)
                 : sampled_sequence_probability(
                       *model, loaded.policies, player, sequence, kScoringSamples,
                       rnd::combine(config.seed_base,
                                    static_cast<std::uint64_t>(player * total + index)));
    }
    double mass = 0;
    for (double p : probabilities) mass += p;
    if (mass <= 0) throw Error("policy marginal mass is zero");
    for (std::int64_t index = 0; index < total; ++index) {
      std::int64_t digits = index;
      double dx = 0;
      double dy = 0;
      std::string encoded;
      for (int t = 0; t < spec.horizon; ++t) {
        const int action = static_cast<int>(digits % num_actions);
        digits /= num_actions;
        if (t) encoded += "-";
        encoded += std::to_string(action);
        if (tag) {
          const auto displacement = tag->action_displacement(action);
          dx += displacement[0];
          dy += displacement[1];
        }
      }
      out << player + 1 << "," << encoded << ","
          << format_g9(probabilities[index] / mass) << "," << format_g9(dx) << ","
          << format_g9(dy) << "\n";
    }
  }
  return out_path.string();
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

std::string run_bounds(const ExperimentConfig& config) {
  config.validate();
  const std::shared_ptr<Model> model = make_model(config);
  const BoundReport report = compute_bound_report(bound_params_for(config, *model));
  const std::string text = format_bound_report(report);
  fs::create_directories(config.output_dir);
  const fs::path path = fs::path(config.output_dir) / "bounds.txt";
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_file_header(out, config, "none");
  out << text;
  return text;
}

// ---------------------------------------------------------------------------
// oracle suite
// ---------------------------------------------------------------------------

namespace {

bool suite_check(std::ostream& out, const std::string& name, bool ok) {
  out << "oracle_suite: " << name << " " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

}  // namespace

OracleSuiteResult run_oracle_suite(std::ostream& out) {
  OracleSuiteResult result;
  auto record = [&](const std::string& name, bool ok) {
    if (suite_check(out, name, ok)) {
      ++result.passed;
    } else {
      ++result.failed;
    }
  };

  const auto duel = std::make_shared<OracleGame>(make_signal_duel());

  // Table round trip through the text format.
  {
    const fs::path path = fs::temp_directory_path() / "posgsolve_oracle_suite.game";
    save_oracle_tables(duel->tables(), path.string());
    const OracleTables reloaded = load_oracle_tables(path.string());
    bool ok = reloaded.num_states == duel->tables().num_states &&
              reloaded.transition == duel->tables().transition &&
              reloaded.observation == duel->tables().observation &&
              reloaded.reward == duel->tables().reward &&
              reloaded.initial_belief == duel->tables().initial_belief;
    fs::remove(path);
    record("table_round_trip", ok);
  }

  // Monte Carlo policy value against exact evaluation, uniform policies.
  {
    std::array<BehaviorPolicy, 2> uniform{
        BehaviorPolicy(0, duel->spec().action_counts[0]),
        BehaviorPolicy(1, duel->spec().action_counts[1])};
    const auto exact = exact_behavior_value(*duel, uniform);
    Rng rng(7);
    const auto estimate = rollout_value(duel, uniform, 40000, rng);
    bool ok = true;
    for (int p = 0; p < kNumPlayers; ++p) {
      ok = ok && std::abs(estimate[p].mean - exact[p]) <=
                     3 * estimate[p].se + 1e-3;
    }
    record("rollout_vs_exact_value", ok);
  }

  // Full-width solver reaches a small gap on the duel.
  {
    const ExactEvaluator evaluator(*duel);
    const VanillaCfrResult solved = vanilla_cfr_exact(*duel, 2000);
    record("full_width_cfr_gap",
           evaluator.nashconv(solved.average_policies) <= 0.02);
  }

  // Sampled-tree solver sanity on the duel.
  {
    const ExactEvaluator evaluator(*duel);
    Rng rng(11);
    Cdit::Options options;
    options.particles = 512;
    options.cache_bytes = 512u << 20;
    Cdit tree(duel, options, rng);
    EscfrOptions solve_options;
    solve_options.iterations = 20000;
    const SolveReport report = solve_escfr(tree, solve_options, rng);
    record("sampled_tree_solver_gap", evaluator.nashconv(report.policies) <= 0.15);
  }

  // Particle posterior against the exact posterior on a random game.
  {
    const auto game =
        std::make_shared<OracleGame>(make_random_game(4, 2, 3, 3, 0.9, 99));
    Rng rng(13);
    const int particles = 20000;
    ParticleBelief belief = sample_initial_belief(*game, particles, rng);
    ExactBelief exact = game->initial_belief();
    const JointAction action{1, 0};
    const auto propagated = propagate(*game, belief, action, rng);
    // Condition on the most likely joint observation.
    JointObservation obs{0, 0};
    double best_prob = -1;
    for (int code = 0; code < game->spec().num_joint_observations(); ++code) {
      const JointObservation candidate =
          joint_observation_from_code(game->spec(), code);
      const double p = exact_observation_prob(*game, exact, action, candidate);
      if (p > best_prob) {
        best_prob = p;
        obs = candidate;
      }
    }
    const ParticleBelief posterior =
        reweight(*game, propagated, belief.weights, action, obs);
    exact = exact_bayes_update(*game, exact, action, obs);
    const ExactBelief particle_dist = belief_from_particles(*game, posterior);
    record("particle_vs_exact_posterior",
           total_variation(particle_dist, exact) <= 0.05);
  }

  // Closed-form constants against frozen reference values.
  {
    bool ok = std::abs(epsilon_omega_pi(0.1, 0.95, 5) - 0.9596324375) < 1e-12;
    ok = ok && std::abs(delta_u(1.0, 0.95, 5) - 4.52438125) < 1e-12;
    const std::array<double, 2> du{1.0, 1.0};
    const std::array<int, 2> actions{2, 2};
    ok = ok && std::abs(escfr_epsilon(0.5, du, actions, 10, 1, 100) - 12.0) < 1e-9;
    record("bound_constants", ok);
  }

  return result;
}

}  // namespace posg
