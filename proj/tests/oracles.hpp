#pragma once

// Brute-force reference implementations used only by the tests. None of
// them call into the engines, the LP solver or MixedRadix.

#include <set>
#include <vector>

#include "mechlab/epistemic.hpp"
#include "mechlab/game.hpp"

namespace oracle {

using mechlab::Environment;
using mechlab::Mechanism;
using mechlab::Rational;

using PureProfile = std::vector<std::vector<std::size_t>>;  // [i][t_i] -> action

// Every pure profile with no profitable pure deviation at any (i, t_i).
std::set<PureProfile> naive_pure_bne(const Environment& env, const Mechanism& mech);

// Interim payoff of (i, t_i) playing a while opponents follow profile.
Rational interim_payoff(const Environment& env, const Mechanism& mech, const PureProfile& profile, std::size_t i,
                        std::size_t t_i, std::size_t a);

// Exact Fourier-Motzkin feasibility of {x : A x <= b}.
struct Ineq {
  std::vector<Rational> a;
  Rational b;
};
bool fm_feasible(std::vector<Ineq> rows, std::size_t num_vars);

// Never-best-reply elimination for two-agent games: an action survives when
// some conjecture supported on surviving opponent (type, action) pairs, with
// type marginal equal to the belief, makes it a best reply. Feasibility by
// Fourier-Motzkin.
std::vector<std::vector<std::vector<std::size_t>>> icr_by_elimination(const Environment& env, const Mechanism& mech);

// Grid payoffs of the double auction computed directly from the trading rule.
Rational buyer_payoff(std::size_t n, const Rational& w, const std::vector<Rational>& ask_mass, std::size_t v,
                      std::size_t bid);
Rational seller_payoff(std::size_t n, const Rational& w, const std::vector<Rational>& bid_mass, std::size_t c,
                       std::size_t ask);
std::vector<std::size_t> argmax_set(std::size_t n, const std::vector<Rational>& payoffs);

// Continuum imitation gain of buyer value v bidding as type r when buyers
// bid 2x/3 and sellers ask 2c/3 + 1/3, by composite Simpson quadrature.
double continuum_imitation_gain(double v, double r, int panels);

// Events W, RAT, TT, PM and SOL of a two-agent epistemic model, recomputed
// with plain loops over states.
struct EpistemicEvents {
  mechlab::Event W[2], RAT[2], TT[2], PM[2], SOL[2];
};
EpistemicEvents two_agent_events(const Environment& env, const Mechanism& mech, const mechlab::EpistemicModel& m,
                                 const mechlab::SolutionSet& sol);

}  // namespace oracle
