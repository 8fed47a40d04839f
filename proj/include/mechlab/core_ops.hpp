#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mechlab/game.hpp"

namespace mechlab {

// Precomputed u_i(mu(s), t) for every agent, action profile and type profile.
class PayoffTable {
 public:
  PayoffTable(const Environment& env, const Mechanism& mech);

  const Environment& env() const { return *env_; }
  const Mechanism& mech() const { return *mech_; }
  const MixedRadix& types() const { return types_; }
  const MixedRadix& actions() const { return actions_; }
  const MixedRadix& opp_types(std::size_t i) const { return opp_types_[i]; }
  const MixedRadix& opp_actions(std::size_t i) const { return opp_actions_[i]; }
  const Rational& u(std::size_t i, std::size_t s, std::size_t t) const {
    return table_[(i * actions_.size() + s) * types_.size() + t];
  }
  const Rational& belief(std::size_t i, std::size_t t_i, std::size_t k) const {
    return env_->beliefs[i][t_i][k];
  }

  // Interim payoff of pure own action s_i against conjecture e.
  Rational interim(std::size_t i, std::size_t t_i, std::size_t s_i, const Expectation& e) const;
  // Interim payoff when opponents follow a pure profile given per opponent type index.
  Rational interim_pure(std::size_t i, std::size_t t_i, std::size_t s_i,
                        const std::vector<std::size_t>& opp_action_by_type) const;

 private:
  const Environment* env_;
  const Mechanism* mech_;
  MixedRadix types_, actions_;
  std::vector<MixedRadix> opp_types_, opp_actions_;
  std::vector<Rational> table_;
};

Rational lottery_utility(const Environment& env, std::size_t i, const Lottery& l, std::size_t t);

Rational interim_expected_utility(const Environment& env, const Mechanism& mech, std::size_t i,
                                  std::size_t t_i, const MixedAction& own, const Expectation& e);

// Pure maximisers of the interim payoff against e, in action order.
std::vector<std::size_t> best_replies(const Environment& env, const Mechanism& mech, std::size_t i,
                                      std::size_t t_i, const Expectation& e);
std::vector<std::size_t> best_replies(const PayoffTable& pt, std::size_t i, std::size_t t_i,
                                      const Expectation& e);

// f(t) = sum_s sigma(t)[s] mu(s).
SCF outcome_of(const Environment& env, const Mechanism& mech, const StrategyProfile& sigma);

// Gain of type t_i from reporting t_i' under f (positive means a violation).
Rational misreport_gain(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i,
                        std::size_t t_i_report);
// True when no misreport of type t_i is profitable.
bool bic_at_cell(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i);

struct BicViolation {
  std::size_t agent = 0;
  std::size_t type = 0;
  std::size_t report = 0;
  Rational truthful;
  Rational misreport;
  Rational gap;  // misreport - truthful
};

// Truthful and misreport interim utilities of (i, t_i) reporting `report`.
BicViolation bic_deviation(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i,
                           std::size_t report);

struct BicReport {
  bool holds = true;
  std::optional<BicViolation> violation;  // first in (i, t_i, t_i') order
};

BicReport check_bic(const Environment& env, const SCF& f);

enum class SirbicFailure { None, StrictViolation, EqualityWithResponsiveness };

struct SirbicReport {
  bool holds = true;
  SirbicFailure failure = SirbicFailure::None;
  std::optional<BicViolation> witness;
  std::optional<std::size_t> differing_opponent_types;  // t_{-i} where f(t_i',.) != f(t_i,.)
};

SirbicReport check_sirbic(const Environment& env, const SCF& f);

enum class ImplementFailure { None, EmptySolutionSet, OutcomeMismatch, MemberNotReached };

struct ImplementReport {
  bool holds = true;
  ImplementFailure failure = ImplementFailure::None;
  std::optional<std::size_t> profile;     // offending solution
  std::optional<std::size_t> type_profile;
  std::optional<std::size_t> member;      // unreached SCS member
};

ImplementReport check_implements(const Environment& env, const Mechanism& mech,
                                 const SolutionSet& solset, const std::variant<SCF, SCS>& target);

// Distinct outcome functions of the solutions, in first-appearance order.
SCS outcome_set(const Environment& env, const Mechanism& mech, const SolutionSet& solset);

std::string describe(SirbicFailure f);
std::string describe(ImplementFailure f);

}  // namespace mechlab
