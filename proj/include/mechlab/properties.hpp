#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/game.hpp"

namespace mechlab {

struct CellWitness {
  std::size_t agent = 0;
  std::size_t type = 0;
  std::optional<std::size_t> witness;  // solution index, or SCS member index
};

struct PropertyVerdict {
  std::string property;
  bool holds = true;
  bool vacuous = false;  // empty solution set
  std::vector<CellWitness> cells;
  // Failing evidence: offending solution and its deviation.
  std::optional<std::size_t> profile;
  std::optional<BicViolation> violation;
  std::string note;
};

// Some solution is a truthful-mimicry equilibrium for each (i, t_i).
PropertyVerdict check_wsc(const Environment& env, const Mechanism& mech, const SolutionSet& solset);
// Every solution resists every mimicry deviation. Requires product-form profiles.
PropertyVerdict check_twsc(const Environment& env, const Mechanism& mech, const SolutionSet& solset);
// Responses are best replies to the recorded expectations and some
// (sigma_i, e_{i,t_i}) pair is itself a solution for each (i, t_i).
// Throws NotCheckable without full provenance.
PropertyVerdict check_sc(const Environment& env, const Mechanism& mech, const SolutionSet& solset);

// Per (i, t_i), the first member of F that is BIC at that cell.
std::vector<CellWitness> partial_bic_witnesses(const Environment& env, const SCS& F);

// Profile t -> sigma_i(t_i) x e(t_{-i}).
StrategyProfile pair_profile(const Environment& env, const Mechanism& mech,
                             const StrategyProfile& sigma, const Expectation& e);

struct InstanceSizes {
  std::size_t agents = 2;
  std::size_t types = 2;
  std::size_t actions = 2;
  std::size_t outcomes = 3;
};

struct RandomInstance {
  Environment env;
  Mechanism mech;
  SCF scf;
};

// Deterministic in (seed, sizes). Beliefs have every entry at least
// 1/(10 |T_{-i}|); utilities are integers in [-3, 3].
RandomInstance random_instance(std::uint64_t seed, const InstanceSizes& sizes);

enum class TheoremId { T1, T2, T3, T4, T5 };

std::optional<TheoremId> parse_theorem(const std::string& s);
std::string to_string(TheoremId t);

struct SweepCheck {
  std::string name;  // e.g. "bne.fwd"
  bool hypothesis = false;
  bool conclusion = true;
};

struct SweepTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<SweepCheck> checks;
  std::string status;  // pass | hypothesis-not-met | counterexample | resource-error
};

struct SweepReport {
  TheoremId theorem = TheoremId::T1;
  std::uint64_t base_seed = 0;
  InstanceSizes sizes;
  std::vector<std::string> check_names;
  std::vector<SweepTrial> rows;
  std::size_t counterexamples = 0;
  std::map<std::string, std::size_t> hypothesis_met;
  std::string status;  // pass | fail

  std::string to_csv() const;
};

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

SweepReport validate_theorem(TheoremId theorem, std::size_t trials, const InstanceSizes& sizes,
                             std::uint64_t seed, Exec exec = Exec::Parallel, std::size_t first_trial = 0);

// Cross-concept implication audit on one instance.
struct ImplicationCheck {
  std::string name;
  bool applicable = false;
  bool holds = true;
};

std::vector<ImplicationCheck> audit_implications(const Environment& env, const Mechanism& mech,
                                                 const SCF& scf);

// Level-k configuration used by the sweeps.
LevelKConfig sweep_level_k_config();

}  // namespace mechlab
