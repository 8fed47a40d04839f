#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mechlab/engines.hpp"
#include "mechlab/game.hpp"
#include "mechlab/properties.hpp"

namespace mechlab {

// Interim act: one outcome lottery per opponent type profile t_{-i}.
using IAAct = std::vector<Lottery>;
// Subset of a declared act universe, bit k for act k.
using Menu = std::uint32_t;

inline constexpr std::size_t kMaxUniverse = 16;

class ChoiceCorrespondence {
 public:
  ChoiceCorrespondence() = default;
  ChoiceCorrespondence(std::size_t agent, std::size_t type, std::vector<IAAct> universe);

  // Expected-utility maximiser of type (i, t_i).
  static ChoiceCorrespondence expected_utility(const Environment& env, std::size_t i, std::size_t t_i,
                                               std::vector<IAAct> universe);
  static ChoiceCorrespondence choose_all(std::size_t i, std::size_t t_i, std::vector<IAAct> universe);

  std::size_t agent() const { return agent_; }
  std::size_t type() const { return type_; }
  const std::vector<IAAct>& universe() const { return universe_; }
  Menu full_menu() const { return static_cast<Menu>((1u << universe_.size()) - 1); }

  void set(Menu menu, Menu chosen);
  bool defined(Menu menu) const;
  // Throws InputError "undeclared-menu" when the menu has no entry.
  Menu choose(Menu menu) const;

  std::optional<std::size_t> index_of(const IAAct& act) const;
  // Throws InputError "undeclared-act" when an act is outside the universe.
  Menu menu_of(const std::vector<IAAct>& acts) const;

  std::vector<Diagnostic> validate() const;

 private:
  std::size_t agent_ = 0;
  std::size_t type_ = 0;
  std::vector<IAAct> universe_;
  std::vector<std::optional<Menu>> table_;
};

// ChoiceCorrespondence per (i, t_i).
using ChoiceProfile = std::vector<std::vector<ChoiceCorrespondence>>;

ChoiceProfile expected_utility_profile(const Environment& env, const std::vector<std::vector<std::vector<IAAct>>>& universes);

// Act induced by own mixed action m against conjecture e.
IAAct act_of(const Environment& env, const Mechanism& mech, std::size_t i, const MixedAction& m,
             const Expectation& e);
// f(t_i', .) as an act of agent i.
IAAct direct_act(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i_report);

// O_i(sigma_{-i}): acts reachable by varying the own pure action.
std::vector<IAAct> action_menu(const Environment& env, const Mechanism& mech, std::size_t i, const Expectation& e);
// X_i(sigma_{-i}): acts reachable by playing sigma_i(t_i') for some t_i'. Product profiles only.
std::vector<IAAct> type_menu(const Environment& env, const Mechanism& mech, std::size_t i,
                             const StrategyProfile& sigma);
// O_i^{f,t_i}: acts reachable by own report in the direct mechanism.
std::vector<IAAct> direct_menu(const Environment& env, const SCF& f, std::size_t i);

std::vector<IAAct> dedupe(std::vector<IAAct> acts);
bool is_submenu(const std::vector<IAAct>& x, const std::vector<IAAct>& y);

enum class IcMode { IC, QIC };

struct ChoiceCell {
  std::size_t agent = 0;
  std::size_t type = 0;
  bool holds = false;
  std::optional<Menu> menu;  // the direct menu, or the QIC supermenu found
};

std::vector<ChoiceCell> check_ic_choice(const Environment& env, const SCF& f, const ChoiceProfile& C, IcMode mode);

struct IiaVerdict {
  bool holds = true;
  Menu x = 0;
  Menu y = 0;
};

// C(X) ⊆ Y ⊆ X implies C(X) ⊆ C(Y), over every declared menu pair.
IiaVerdict check_iia(const ChoiceCorrespondence& c);

struct WccReport {
  bool holds = true;
  bool vacuous = false;
  std::vector<CellWitness> cells;  // witness solution per (i, t_i)
  // Choice-consistency audit, which needs full provenance.
  bool cc_checked = false;
  bool cc_holds = false;
  bool all_iia = false;
  // CC witness act also satisfies C(O_i(e)) ⊆ X_i(e) at every cell.
  bool choice_within_type_menu = false;
  std::string note;
};

WccReport check_wcc(const Environment& env, const Mechanism& mech, const SolutionSet& solset, const ChoiceProfile& C);

// Abstract-act audit of "CC and IIA imply IC". Each trial draws a universe
// of at most max_acts acts, a menu O, a submenu X, an IIA choice correspondence
// and a chosen act a in C(O) ∩ X.
struct CorollarySweep {
  std::size_t trials = 0;
  std::size_t hypothesis_met = 0;        // CC + IIA
  std::size_t counterexamples = 0;       // a not in C(X)
  std::size_t strengthened_met = 0;      // additionally C(O) ⊆ X
  std::size_t strengthened_counterexamples = 0;
  std::size_t iia_rejected = 0;          // unrestricted draws failing IIA
};

CorollarySweep choice_corollary_sweep(std::size_t trials, std::uint64_t seed, std::size_t max_acts = 4);

// Random IIA-satisfying table over n abstract acts, built menu by menu in
// increasing size.
std::vector<Menu> random_iia_table(std::mt19937_64& rng, std::size_t n);
// true when the table (indexed by menu, entry 0 unused) satisfies IIA.
bool table_satisfies_iia(const std::vector<Menu>& table, std::size_t n);

}  // namespace mechlab
