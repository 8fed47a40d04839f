#include "mechlab/choice.hpp"

#include <algorithm>
#include <bit>

#include "mechlab/core_ops.hpp"
#include "mechlab/properties.hpp"
#include "mechlab/random.hpp"

namespace mechlab {

namespace {

bool subset(Menu a, Menu b) { return (a & ~b) == 0; }

Rational act_utility(const Environment& env, std::size_t i, std::size_t t_i, const IAAct& act) {
  MixedRadix ts = env.type_space();
  Rational r = 0;
  for (std::size_t k = 0; k < act.size(); ++k) {
    r += env.beliefs[i][t_i][k] * lottery_utility(env, i, act[k], ts.merge(i, t_i, k));
  }
  return r;
}

std::string menu_text(Menu m) {
  std::string s = "{";
  bool first = true;
  for (std::size_t k = 0; k < 32; ++k) {
    if (m & (1u << k)) {
      s += (first ? "" : ",") + std::to_string(k);
      first = false;
    }
  }
  return s + "}";
}

}  // namespace

ChoiceCorrespondence::ChoiceCorrespondence(std::size_t agent, std::size_t type, std::vector<IAAct> universe)
    : agent_(agent), type_(type), universe_(std::move(universe)) {
  if (universe_.empty()) throw InputError("empty-universe", "act universe must be nonempty");
  if (universe_.size() > kMaxUniverse) {
    throw InputError("universe-too-large", "act universe exceeds " + std::to_string(kMaxUniverse) + " acts");
  }
  table_.assign(std::size_t{1} << universe_.size(), std::nullopt);
}

ChoiceCorrespondence ChoiceCorrespondence::expected_utility(const Environment& env, std::size_t i, std::size_t t_i,
                                                            std::vector<IAAct> universe) {
  ChoiceCorrespondence c(i, t_i, std::move(universe));
  std::vector<Rational> u;
  for (const auto& a : c.universe_) u.push_back(act_utility(env, i, t_i, a));
  for (Menu m = 1; m <= c.full_menu(); ++m) {
    std::optional<Rational> best;
    Menu chosen = 0;
    for (std::size_t k = 0; k < c.universe_.size(); ++k) {
      if (!(m & (1u << k))) continue;
      if (!best || u[k] > *best) {
        best = u[k];
        chosen = 1u << k;
      } else if (u[k] == *best) {
        chosen |= 1u << k;
      }
    }
    c.set(m, chosen);
  }
  return c;
}

ChoiceCorrespondence ChoiceCorrespondence::choose_all(std::size_t i, std::size_t t_i, std::vector<IAAct> universe) {
  ChoiceCorrespondence c(i, t_i, std::move(universe));
  for (Menu m = 1; m <= c.full_menu(); ++m) c.set(m, m);
  return c;
}

void ChoiceCorrespondence::set(Menu menu, Menu chosen) {
  if (menu == 0 || !subset(menu, full_menu())) throw InputError("bad-menu", "menu " + menu_text(menu) + " is not a nonempty submenu");
  table_[menu] = chosen;
}

bool ChoiceCorrespondence::defined(Menu menu) const { return menu < table_.size() && table_[menu].has_value(); }

Menu ChoiceCorrespondence::choose(Menu menu) const {
  if (!defined(menu)) throw InputError("undeclared-menu", "choice undefined on menu " + menu_text(menu));
  return *table_[menu];
}

std::optional<std::size_t> ChoiceCorrespondence::index_of(const IAAct& act) const {
  for (std::size_t k = 0; k < universe_.size(); ++k) {
    if (universe_[k] == act) return k;
  }
  return std::nullopt;
}

Menu ChoiceCorrespondence::menu_of(const std::vector<IAAct>& acts) const {
  Menu m = 0;
  for (const auto& a : acts) {
    auto k = index_of(a);
    if (!k) throw InputError("undeclared-act", "act outside the declared universe");
    m |= 1u << *k;
  }
  return m;
}

std::vector<Diagnostic> ChoiceCorrespondence::validate() const {
  std::vector<Diagnostic> out;
  for (Menu m = 1; m <= full_menu(); ++m) {
    const std::string path = "choice[" + menu_text(m) + "]";
    if (!table_[m]) {
      out.push_back({"undeclared-menu", "choice undefined on menu", path});
    } else if (*table_[m] == 0) {
      out.push_back({"empty-choice", "choice must be nonempty", path});
    } else if (!subset(*table_[m], m)) {
      out.push_back({"choice-outside-menu", "chosen acts must belong to the menu", path});
    }
  }
  return out;
}

ChoiceProfile expected_utility_profile(const Environment& env,
                                       const std::vector<std::vector<std::vector<IAAct>>>& universes) {
  ChoiceProfile out(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      out[i].push_back(ChoiceCorrespondence::expected_utility(env, i, t, universes[i][t]));
    }
  }
  return out;
}

IAAct act_of(const Environment& env, const Mechanism& mech, std::size_t i, const MixedAction& m,
             const Expectation& e) {
  MixedRadix as = mech.action_space();
  const std::size_t na = env.num_outcomes();
  IAAct act;
  for (const Dist& conj : e.conjecture) {
    std::vector<Rational> p(na, Rational(0));
    for (std::size_t s_i = 0; s_i < m.size(); ++s_i) {
      if (m[s_i] == 0) continue;
      for (const auto& [s_o, q] : conj.entries()) {
        const Lottery& l = mech.outcome[as.merge(i, s_i, s_o)];
        Rational w = m[s_i] * q;
        for (std::size_t a = 0; a < na; ++a) p[a] += w * l.prob[a];
      }
    }
    act.push_back(Lottery{p});
  }
  return act;
}

IAAct direct_act(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i_report) {
  MixedRadix ts = env.type_space();
  MixedRadix opp = ts.without(i);
  IAAct act;
  for (std::size_t k = 0; k < opp.size(); ++k) act.push_back(f.value[ts.merge(i, t_i_report, k)]);
  return act;
}

std::vector<IAAct> dedupe(std::vector<IAAct> acts) {
  std::vector<IAAct> out;
  for (auto& a : acts) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  }
  return out;
}

bool is_submenu(const std::vector<IAAct>& x, const std::vector<IAAct>& y) {
  for (const auto& a : x) {
    if (std::find(y.begin(), y.end(), a) == y.end()) return false;
  }
  return true;
}

std::vector<IAAct> action_menu(const Environment& env, const Mechanism& mech, std::size_t i, const Expectation& e) {
  std::vector<IAAct> out;
  for (std::size_t s = 0; s < mech.num_actions(i); ++s) {
    out.push_back(act_of(env, mech, i, pure_action(s, mech.num_actions(i)), e));
  }
  return dedupe(std::move(out));
}

std::vector<IAAct> type_menu(const Environment& env, const Mechanism& mech, std::size_t i,
                             const StrategyProfile& sigma) {
  if (!sigma.product_form) throw InputError("not-product", "type menus need product-form profiles");
  Expectation e = conjecture_from_profile(env, mech, sigma, i, 0);
  std::vector<IAAct> out;
  for (std::size_t t = 0; t < env.num_types(i); ++t) out.push_back(act_of(env, mech, i, sigma.marginals[i][t], e));
  return dedupe(std::move(out));
}

std::vector<IAAct> direct_menu(const Environment& env, const SCF& f, std::size_t i) {
  std::vector<IAAct> out;
  for (std::size_t t = 0; t < env.num_types(i); ++t) out.push_back(direct_act(env, f, i, t));
  return dedupe(std::move(out));
}

std::vector<ChoiceCell> check_ic_choice(const Environment& env, const SCF& f, const ChoiceProfile& C, IcMode mode) {
  std::vector<ChoiceCell> out;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    std::vector<IAAct> menu = direct_menu(env, f, i);
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      const ChoiceCorrespondence& c = C.at(i).at(t);
      ChoiceCell cell{i, t, false, std::nullopt};
      Menu m = c.menu_of(menu);
      Menu own = c.menu_of({direct_act(env, f, i, t)});
      if (mode == IcMode::IC) {
        cell.menu = m;
        cell.holds = subset(own, c.choose(m));
      } else {
        for (Menu sup = 1; sup <= c.full_menu() && !cell.holds; ++sup) {
          if (!subset(m, sup) || !c.defined(sup)) continue;
          if (subset(own, c.choose(sup))) {
            cell.holds = true;
            cell.menu = sup;
          }
        }
      }
      out.push_back(cell);
    }
  }
  return out;
}

IiaVerdict check_iia(const ChoiceCorrespondence& c) {
  const Menu full = c.full_menu();
  for (Menu x = 1; x <= full; ++x) {
    Menu cx = c.choose(x);
    // Enumerate submenus y of x that contain C(x).
    Menu free_bits = x & ~cx;
    for (Menu extra = free_bits;; extra = (extra - 1) & free_bits) {
      Menu y = cx | extra;
      if (y != 0 && !subset(cx, c.choose(y))) return {false, x, y};
      if (extra == 0) break;
    }
  }
  return {};
}

WccReport check_wcc(const Environment& env, const Mechanism& mech, const SolutionSet& solset, const ChoiceProfile& C) {
  WccReport rep;
  rep.vacuous = solset.empty();
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      const ChoiceCorrespondence& c = C.at(i).at(t);
      CellWitness cell{i, t, std::nullopt};
      for (std::size_t p = 0; p < solset.size() && !cell.witness; ++p) {
        const StrategyProfile& sp = solset.profiles[p];
        Expectation e = conjecture_from_profile(env, mech, sp, i, t);
        Menu x = c.menu_of(type_menu(env, mech, i, sp));
        Menu own = c.menu_of({act_of(env, mech, i, sp.marginals[i][t], e)});
        if (subset(own, c.choose(x))) cell.witness = p;
      }
      if (!cell.witness && !solset.empty()) rep.holds = false;
      rep.cells.push_back(cell);
    }
  }

  rep.all_iia = true;
  for (const auto& row : C) {
    for (const auto& c : row) rep.all_iia = rep.all_iia && check_iia(c).holds;
  }
  if (solset.empty() || !solset.has_full_provenance()) {
    rep.note = solset.empty() ? "empty solution set" : "choice consistency not checkable without provenance";
    return rep;
  }
  rep.cc_checked = true;
  rep.cc_holds = true;
  rep.choice_within_type_menu = true;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      const ChoiceCorrespondence& c = C.at(i).at(t);
      bool cc = false, within = false;
      for (std::size_t p = 0; p < solset.size() && !within; ++p) {
        const StrategyProfile& sp = solset.profiles[p];
        if (!sp.product_form) continue;
        const Expectation& e = (*solset.provenance[p])[i][t];
        Menu o = c.menu_of(action_menu(env, mech, i, e));
        Menu own = c.menu_of({act_of(env, mech, i, sp.marginals[i][t], e)});
        if (!subset(own, c.choose(o))) continue;
        StrategyProfile pair = pair_profile(env, mech, sp, e);
        bool in_solset = std::find(solset.profiles.begin(), solset.profiles.end(), pair) != solset.profiles.end();
        if (!in_solset) continue;
        cc = true;
        Menu x = 0;
        for (std::size_t r = 0; r < env.num_types(i); ++r) {
          x |= c.menu_of({act_of(env, mech, i, sp.marginals[i][r], e)});
        }
        within = subset(c.choose(o), x);
      }
      rep.cc_holds = rep.cc_holds && cc;
      rep.choice_within_type_menu = rep.choice_within_type_menu && within;
    }
  }
  if (rep.cc_holds && rep.all_iia && rep.choice_within_type_menu && !rep.holds) {
    throw std::logic_error("CC with IIA and C(O) inside X did not yield WCC");
  }
  return rep;
}

bool table_satisfies_iia(const std::vector<Menu>& table, std::size_t n) {
  const Menu full = static_cast<Menu>((1u << n) - 1);
  for (Menu x = 1; x <= full; ++x) {
    Menu cx = table[x];
    Menu free_bits = x & ~cx;
    for (Menu extra = free_bits;; extra = (extra - 1) & free_bits) {
      Menu y = cx | extra;
      if (y != 0 && !subset(cx, table[y])) return false;
      if (extra == 0) break;
    }
  }
  return true;
}

std::vector<Menu> random_iia_table(std::mt19937_64& rng, std::size_t n) {
  const Menu full = static_cast<Menu>((1u << n) - 1);
  std::vector<Menu> menus;
  for (Menu m = 1; m <= full; ++m) menus.push_back(m);
  std::stable_sort(menus.begin(), menus.end(), [](Menu a, Menu b) { return std::popcount(a) < std::popcount(b); });
  std::vector<Menu> table(static_cast<std::size_t>(full) + 1, 0);
  for (Menu x : menus) {
    // Constraints only involve proper submenus, which are already fixed;
    // C(x) = x always satisfies them.
    Menu pick = x;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Menu cand = 0;
      while (cand == 0) {
        cand = static_cast<Menu>(uniform_below(rng, static_cast<std::uint64_t>(full) + 1)) & x;
      }
      bool ok = true;
      Menu free_bits = x & ~cand;
      for (Menu extra = free_bits;; extra = (extra - 1) & free_bits) {
        Menu y = cand | extra;
        if (y != x && !subset(cand, table[y])) {
          ok = false;
          break;
        }
        if (extra == 0) break;
      }
      if (ok) {
        pick = cand;
        break;
      }
    }
    table[x] = pick;
  }
  return table;
}

CorollarySweep choice_corollary_sweep(std::size_t trials, std::uint64_t seed, std::size_t max_acts) {
  if (max_acts < 1 || max_acts > kMaxUniverse) throw InputError("universe-too-large", "max_acts out of range");
  CorollarySweep out;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    std::mt19937_64 rng(trial_seed(seed, k));
    const std::size_t n = 1 + uniform_below(rng, max_acts);
    const Menu full = static_cast<Menu>((1u << n) - 1);

    // Unrestricted draw, counted only for the IIA rejection rate.
    std::vector<Menu> raw(static_cast<std::size_t>(full) + 1, 0);
    for (Menu m = 1; m <= full; ++m) {
      Menu c = 0;
      while (c == 0) c = static_cast<Menu>(uniform_below(rng, static_cast<std::uint64_t>(full) + 1)) & m;
      raw[m] = c;
    }
    if (!table_satisfies_iia(raw, n)) ++out.iia_rejected;

    std::vector<Menu> C = random_iia_table(rng, n);
    Menu O = 0;
    while (O == 0) O = static_cast<Menu>(uniform_below(rng, static_cast<std::uint64_t>(full) + 1));
    // a: an act chosen from O (choice consistency of the pair solution).
    std::vector<std::size_t> chosen;
    for (std::size_t b = 0; b < n; ++b) {
      if (C[O] & (1u << b)) chosen.push_back(b);
    }
    const std::size_t a = chosen[uniform_below(rng, chosen.size())];
    // X: submenu of O containing a.
    Menu X = (1u << a) | (static_cast<Menu>(uniform_below(rng, static_cast<std::uint64_t>(full) + 1)) & O);
    ++out.hypothesis_met;
    const bool ic = (C[X] & (1u << a)) != 0;
    if (!ic) ++out.counterexamples;
    if (subset(C[O], X)) {
      ++out.strengthened_met;
      if (!ic) ++out.strengthened_counterexamples;
    }
  }
  return out;
}

}  // namespace mechlab
