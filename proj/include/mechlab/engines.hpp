#pragma once

#include <optional>
#include <vector>

#include "mechlab/core_ops.hpp"
#include "mechlab/game.hpp"
#include "mechlab/guard.hpp"

namespace mechlab {

enum class AnchorKind { Uniform, TruthfulLabel, Custom };

struct AnchorSpec {
  AnchorKind kind = AnchorKind::Uniform;
  std::vector<std::vector<MixedAction>> custom;  // [i][t_i] when Custom

  // Level-0 behaviour alpha_i(t_i) for every agent and type.
  std::vector<std::vector<MixedAction>> resolve(const Environment& env, const Mechanism& mech) const;
};

struct LevelKConfig {
  std::size_t k_max = 1;
  AnchorSpec anchor;
};

struct LevelKResult {
  SolutionSet solutions;
  // levels[k-1][i]: level-k consistent pure strategies of agent i, sorted.
  std::vector<std::vector<std::vector<PureStrategy>>> levels;
  // Level recorded in the provenance of each agent's strategy, per solution.
  std::vector<std::vector<std::size_t>> recorded_level;
};

// allowed[i][t_i][k]: opponent action profiles (indices into S_{-i}) that the
// conjecture of (i, t_i) may support at opponent type profile k. Never empty.
struct DeltaRestriction {
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> allowed;

  static DeltaRestriction unrestricted(const Environment& env, const Mechanism& mech);
  // Conjectures about agent j may only use actions in actions_of[j].
  static DeltaRestriction from_action_sets(const Environment& env, const Mechanism& mech,
                                           const std::vector<std::vector<std::size_t>>& actions_of);
  std::vector<Diagnostic> validate(const Environment& env, const Mechanism& mech) const;
};

struct CursedConfig {
  Rational chi = 0;
};

struct RationalizableResult {
  SolutionSet solutions;
  std::vector<std::vector<std::vector<std::size_t>>> surviving;  // [i][t_i] sorted actions
  std::size_t rounds = 0;
};

using Survivors = std::vector<std::vector<std::vector<std::size_t>>>;

mpz_class count_pure_profiles(const Environment& env, const Mechanism& mech);

SolutionSet solve_pure_bne(const Environment& env, const Mechanism& mech, Exec exec = Exec::Parallel);

LevelKResult solve_level_k(const Environment& env, const Mechanism& mech, const LevelKConfig& cfg);

RationalizableResult solve_rationalizable(const Environment& env, const Mechanism& mech,
                                          const std::optional<DeltaRestriction>& restriction,
                                          Exec exec = Exec::Parallel);

// One application of the elimination operator to the given survivor sets.
// When conjectures is non-null it receives, per surviving (i, t_i, s_i), a
// supporting conjecture.
Survivors apply_elimination(const PayoffTable& pt, const Survivors& current,
                            const DeltaRestriction& restriction, Exec exec,
                            std::vector<std::vector<std::vector<std::optional<Expectation>>>>*
                                conjectures = nullptr);

SolutionSet solve_cursed(const Environment& env, const Mechanism& mech, const CursedConfig& cfg,
                         Exec exec = Exec::Parallel);

// Expectation whose ordinary best replies equal the cursed best replies of
// (i, t_i) when opponents follow sigma.
Expectation cursed_expectation(const PayoffTable& pt, const StrategyProfile& sigma, std::size_t i,
                               std::size_t t_i, const Rational& chi);

}  // namespace mechlab
