#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/errors.hpp"
#include "mechlab/rational.hpp"

namespace mechlab {

// Mixed-radix indexing of product sets; the last dimension varies fastest.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::size_t> radices);

  std::size_t size() const { return size_; }
  std::size_t dims() const { return radices_.size(); }
  const std::vector<std::size_t>& radices() const { return radices_; }

  std::size_t encode(const std::vector<std::size_t>& digits) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  std::size_t digit(std::size_t index, std::size_t dim) const {
    return (index / strides_[dim]) % radices_[dim];
  }
  std::size_t replace(std::size_t index, std::size_t dim, std::size_t value) const {
    return index + (value - digit(index, dim)) * strides_[dim];
  }
  // Radix over every dimension except `dim`.
  MixedRadix without(std::size_t dim) const;
  // Index in without(dim) of the remaining digits.
  std::size_t project_out(std::size_t index, std::size_t dim) const;
  // Inverse of project_out.
  std::size_t merge(std::size_t dim, std::size_t own, std::size_t rest) const;

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

struct Environment {
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> types;  // T_i
  std::vector<std::string> outcomes;            // A
  // beliefs[i][t_i][k]: p_i(t_{-i} | t_i), k indexing T_{-i} by type_space().without(i).
  std::vector<std::vector<std::vector<Rational>>> beliefs;
  // utility[i][a][t], t indexing T by type_space().
  std::vector<std::vector<std::vector<Rational>>> utility;

  std::size_t num_agents() const { return agents.size(); }
  std::size_t num_types(std::size_t i) const { return types[i].size(); }
  std::size_t num_outcomes() const { return outcomes.size(); }
  MixedRadix type_space() const;

  // Structural and probabilistic checks; empty when valid.
  std::vector<Diagnostic> validate() const;
  void require_valid() const;

  // Beliefs derived by conditioning a full-support common prior over T.
  static std::vector<std::vector<std::vector<Rational>>> beliefs_from_prior(
      const std::vector<std::vector<std::string>>& types, const std::vector<Rational>& prior);
};

struct Lottery {
  std::vector<Rational> prob;  // over A

  static Lottery point(std::size_t outcome, std::size_t num_outcomes);
  bool operator==(const Lottery& o) const { return prob == o.prob; }
  bool operator!=(const Lottery& o) const { return !(*this == o); }
};

std::string describe(const Lottery& l, const std::vector<std::string>& outcome_labels);

struct Mechanism {
  std::vector<std::vector<std::string>> actions;  // S_i
  std::vector<Lottery> outcome;                    // mu(s), s indexing S by action_space()

  std::size_t num_actions(std::size_t i) const { return actions[i].size(); }
  MixedRadix action_space() const;
  std::vector<Diagnostic> validate(const Environment& env) const;
  void require_valid(const Environment& env) const;
};

using MixedAction = std::vector<Rational>;  // over S_i
using PureStrategy = std::vector<std::size_t>;  // action index per own type

MixedAction pure_action(std::size_t a, std::size_t num_actions);

struct StrategyProfile {
  std::vector<Dist> play;  // play[t] over S
  bool product_form = false;
  std::vector<std::vector<MixedAction>> marginals;  // [i][t_i] when product_form
  std::optional<std::vector<PureStrategy>> pure;   // [i][t_i] when pure and product

  bool operator==(const StrategyProfile& o) const { return play == o.play; }
};

StrategyProfile make_pure_profile(const Environment& env, const Mechanism& mech,
                                  std::vector<PureStrategy> actions);
StrategyProfile make_product_profile(const Environment& env, const Mechanism& mech,
                                     std::vector<std::vector<MixedAction>> marginals);
StrategyProfile make_joint_profile(std::vector<Dist> play);

// Conjecture of type (agent, type) about opponents: conjecture[k] over S_{-i},
// k indexing T_{-i}. Correlation across opponents is allowed.
struct Expectation {
  std::size_t agent = 0;
  std::size_t type = 0;
  std::vector<Dist> conjecture;

  bool operator==(const Expectation& o) const {
    return agent == o.agent && type == o.type && conjecture == o.conjecture;
  }
};

using ExpectationProfile = std::vector<std::vector<Expectation>>;  // [i][t_i]

// Conjecture that opponents follow the given profile.
Expectation conjecture_from_profile(const Environment& env, const Mechanism& mech,
                                    const StrategyProfile& sigma, std::size_t i, std::size_t t_i);

struct SCF {
  std::string name;
  std::vector<Lottery> value;  // f(t)
  bool operator==(const SCF& o) const { return value == o.value; }
};

using SCS = std::vector<SCF>;

struct SolutionSet {
  std::string concept_tag;
  std::vector<StrategyProfile> profiles;
  std::vector<std::optional<ExpectationProfile>> provenance;  // parallel to profiles

  bool empty() const { return profiles.empty(); }
  std::size_t size() const { return profiles.size(); }
  bool has_full_provenance() const;
};

// Label of an opponent action profile, e.g. "A" or "A,B".
std::string opponent_action_label(const Mechanism& mech, std::size_t i, std::size_t s_minus_i);
std::string opponent_type_label(const Environment& env, std::size_t i, std::size_t t_minus_i);
std::string action_profile_label(const Mechanism& mech, std::size_t s);
std::string type_profile_label(const Environment& env, std::size_t t);

}  // namespace mechlab
