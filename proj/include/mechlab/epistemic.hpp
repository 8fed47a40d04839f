#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mechlab/game.hpp"
#include "mechlab/guard.hpp"

namespace mechlab {

// Finite epistemic model (H_i, phi_i, eta_i, tau_i). phi[i][h_i] is a
// distribution over H_{-i}, indexed by state_space().without(i).
struct EpistemicModel {
  std::vector<std::vector<Dist>> phi;
  std::vector<std::vector<MixedAction>> eta;
  std::vector<std::vector<std::size_t>> tau;

  std::size_t num_agents() const { return tau.size(); }
  std::size_t num_epistemic_types(std::size_t i) const { return tau[i].size(); }
  MixedRadix state_space() const;
  std::vector<Diagnostic> validate(const Environment& env, const Mechanism& mech) const;
};

using Event = std::vector<bool>;  // indexed by state_space()

enum class ResponseModel { BestReply, Unavailable };

// Response model implied by a solution concept tag.
ResponseModel response_model_for(const std::string& concept_tag);

class EpistemicAnalysis {
 public:
  EpistemicAnalysis(const Environment& env, const Mechanism& mech, const EpistemicModel& model,
                    const SolutionSet& solset, Exec exec = Exec::Parallel);

  const EpistemicModel& model() const { return *model_; }
  const MixedRadix& states() const { return states_; }

  // lambda_i(h_i)[s_{-i}, t_{-i}] as joint[t_{-i}] over S_{-i}.
  const std::vector<Dist>& lambda_joint(std::size_t i, std::size_t h_i) const { return joint_[i][h_i]; }
  Rational lambda_marginal(std::size_t i, std::size_t h_i, std::size_t t_minus_i) const;
  // Conditional play given t_{-i}; nullopt when t_{-i} has zero weight.
  std::optional<Dist> lambda_conditional(std::size_t i, std::size_t h_i, std::size_t t_minus_i) const;

  // Membership of a profile play in S(gamma, t).
  bool in_solution(std::size_t t, const Dist& play) const;
  Dist pair_play(std::size_t i, const MixedAction& own, const Dist& opp) const;

  const Event& W(std::size_t i) const { return W_[i]; }
  const Event& RAT(std::size_t i) const { return RAT_[i]; }
  const Event& TT(std::size_t i) const { return TT_[i]; }
  const Event& PM(std::size_t i) const { return PM_[i]; }
  const Event& SOL(std::size_t i) const { return SOL_[i]; }
  // Throws NotCheckable when the response model is unavailable.
  Event RAT_star(std::size_t i, ResponseModel rm) const;

  // Probability-1 belief: h in K_i(E) iff phi_i(h_i) puts mass 1 on
  // {h_{-i} : (h_i, h_{-i}) in E}.
  Event K(std::size_t i, const Event& E) const;

  std::size_t own(std::size_t h, std::size_t i) const { return states_.digit(h, i); }
  std::size_t opponents(std::size_t h, std::size_t i) const { return states_.project_out(h, i); }
  std::size_t standard_opponent_types(std::size_t i, std::size_t h_minus_i) const;

 private:
  const Environment* env_;
  const Mechanism* mech_;
  const EpistemicModel* model_;
  MixedRadix states_, types_, actions_;
  std::vector<std::vector<Dist>> solution_plays_;  // [t]
  std::vector<std::vector<std::vector<Dist>>> joint_;  // [i][h_i][t_{-i}]
  std::vector<Event> W_, RAT_, TT_, PM_, SOL_;
};

Event event_and(const Event& a, const Event& b);
bool event_subset(const Event& a, const Event& b);

// Witness family sigma^{i,t_i}: product-form solutions with no profitable
// mimicry at (i, t_i).
struct WitnessFamily {
  std::vector<std::vector<std::optional<StrategyProfile>>> sigma;  // [i][t_i]
  bool common = false;  // one profile serves every cell
  bool complete() const;
};

WitnessFamily find_witness_family(const Environment& env, const Mechanism& mech, const SolutionSet& solset);

// Model with H_j = distinct pairs (sigma_j^{i,t_i}(t_j), t_j) and
// phi_j(s_j, t_j) = sigma_{-j}^{j,t_j}(t_{-j}) x p_j(t_{-j} | t_j).
EpistemicModel build_model_from_witnesses(const Environment& env, const Mechanism& mech, const WitnessFamily& family);

enum class Direction { WitnessesToModel, ModelToWitnesses };

struct EpistemicCell {
  std::size_t agent = 0;
  std::size_t type = 0;
  bool hypothesis = false;
  bool holds = false;
  std::optional<std::size_t> h_star;
  bool sol_covers = true;        // SOL_i reached at h_star for every believed t_{-i}
  bool selector_constant = true; // z_i chosen constant in t_{-i}
  std::string note;
};

struct EpistemicReport {
  Direction direction = Direction::WitnessesToModel;
  bool hypothesis_met = false;
  bool holds = false;
  std::vector<EpistemicCell> cells;
  std::optional<EpistemicModel> model;
  std::string note;
};

// WitnessesToModel builds the model from a witness family and checks
// RAT_i ∩ K_i(W_i ∩ SOL_i) for every cell. ModelToWitnesses extracts sigma^{i,t_i}
// from `model` (or from the constructed model when absent) and checks the
// mimicry inequalities and solution membership.
EpistemicReport validate_epistemic_theorems(const Environment& env, const Mechanism& mech, const SolutionSet& solset,
                                            Direction direction, const std::optional<EpistemicModel>& model = std::nullopt);

// Random model with 1..max_h epistemic types per agent, every standard type
// covered, pure or two-point mixed eta and sparse phi.
EpistemicModel random_epistemic_model(const Environment& env, const Mechanism& mech, std::mt19937_64& rng,
                                      std::size_t max_h = 3);

}  // namespace mechlab
