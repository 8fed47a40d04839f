#include <doctest.h>

#include <optional>
#include <random>

#include "mechlab/choice.hpp"
#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/properties.hpp"

using namespace mechlab;

namespace {

Menu bit(std::size_t k) { return static_cast<Menu>(1u << k); }
bool sub(Menu a, Menu b) { return (a & ~b) == 0; }

// Every choice table over n abstract acts (entry 0 unused).
std::vector<std::vector<Menu>> all_tables(std::size_t n) {
  const Menu full = static_cast<Menu>((1u << n) - 1);
  std::vector<std::vector<Menu>> out{std::vector<Menu>(full + 1, 0)};
  for (Menu m = 1; m <= full; ++m) {
    std::vector<std::vector<Menu>> next;
    for (const auto& t : out) {
      for (Menu c = m;; c = (c - 1) & m) {
        if (c == 0) break;
        auto u = t;
        u[m] = c;
        next.push_back(u);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("IC under expected-utility choice coincides with BIC") {
  std::size_t fails = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 3});
    std::vector<std::vector<std::vector<IAAct>>> u(ri.env.num_agents());
    for (std::size_t i = 0; i < ri.env.num_agents(); ++i) {
      u[i].assign(ri.env.num_types(i), dedupe(direct_menu(ri.env, ri.scf, i)));
    }
    ChoiceProfile C = expected_utility_profile(ri.env, u);
    auto cells = check_ic_choice(ri.env, ri.scf, C, IcMode::IC);
    bool all = true;
    for (const auto& c : cells) {
      CHECK(c.holds == bic_at_cell(ri.env, ri.scf, c.agent, c.type));
      all = all && c.holds;
    }
    CHECK(all == check_bic(ri.env, ri.scf).holds);
    if (!all) ++fails;
  }
  CHECK(fails > 0);
}

namespace {

// Expected-utility choice over every act the WCC and CC checks can query;
// nullopt when the universe exceeds the menu limit.
std::optional<ChoiceProfile> wcc_universe(const Environment& env, const Mechanism& mech, const SolutionSet& s) {
  std::vector<std::vector<std::vector<IAAct>>> u(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      std::vector<IAAct> acts;
      for (std::size_t p = 0; p < s.size(); ++p) {
        const StrategyProfile& sp = s.profiles[p];
        for (auto& a : type_menu(env, mech, i, sp)) acts.push_back(a);
        for (auto& a : action_menu(env, mech, i, conjecture_from_profile(env, mech, sp, i, t))) acts.push_back(a);
        if (p < s.provenance.size() && s.provenance[p]) {
          const Expectation& e = (*s.provenance[p])[i][t];
          for (auto& a : action_menu(env, mech, i, e)) acts.push_back(a);
          for (std::size_t r = 0; r < env.num_types(i); ++r) acts.push_back(act_of(env, mech, i, sp.marginals[i][r], e));
        }
      }
      acts = dedupe(acts);
      if (acts.size() > kMaxUniverse) return std::nullopt;
      u[i].push_back(acts);
    }
  }
  return expected_utility_profile(env, u);
}

}  // namespace

TEST_CASE("WCC under expected-utility choice coincides with WSC") {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 3});
    for (bool icr : {false, true}) {
      SolutionSet s = icr ? solve_rationalizable(ri.env, ri.mech, std::nullopt).solutions : solve_pure_bne(ri.env, ri.mech);
      if (s.empty()) continue;
      auto C = wcc_universe(ri.env, ri.mech, s);
      if (!C) continue;
      CHECK(check_wcc(ri.env, ri.mech, s, *C).holds == check_wsc(ri.env, ri.mech, s).holds);
      ++compared;
    }
  }
  CHECK(compared > 100);

  // Cursed play in the cursed fixture fails both.
  auto g = fixtures::cursed_game(Rational(3));
  SolutionSet ce = solve_cursed(g.env, g.mech, CursedConfig{Rational(1, 2)});
  REQUIRE_FALSE(ce.empty());
  auto C = wcc_universe(g.env, g.mech, ce);
  REQUIRE(C);
  CHECK_FALSE(check_wsc(g.env, g.mech, ce).holds);
  CHECK_FALSE(check_wcc(g.env, g.mech, ce, *C).holds);
}

TEST_CASE("IC and QIC separate only from three acts") {
  // Cell: universe of n acts, direct menu M, truthful act a in M.
  auto separated = [](std::size_t n, bool iia_only) {
    const Menu full = static_cast<Menu>((1u << n) - 1);
    for (const auto& table : all_tables(n)) {
      if (iia_only && !table_satisfies_iia(table, n)) continue;
      for (Menu M = 1; M <= full; ++M) {
        for (std::size_t a = 0; a < n; ++a) {
          if (!(M & bit(a))) continue;
          bool ic = table[M] & bit(a);
          bool qic = false;
          for (Menu Y = 1; Y <= full; ++Y) qic = qic || (sub(M, Y) && (table[Y] & bit(a)));
          if (qic != ic) return true;
        }
      }
    }
    return false;
  };
  CHECK_FALSE(separated(1, false));
  CHECK_FALSE(separated(2, false));
  CHECK(separated(3, false));
  CHECK(separated(3, true));
}

TEST_CASE("QIC holds on a supermenu where IC fails") {
  Environment env;
  env.agents = {"i"};
  env.types = {{"t"}};
  env.outcomes = {"a", "b", "c"};
  env.beliefs = {{{Rational(1)}}};
  env.utility = {{{Rational(0)}, {Rational(0)}, {Rational(0)}}};
  SCF f{"f", {Lottery::point(0, 3)}};
  std::vector<IAAct> universe{{Lottery::point(0, 3)}, {Lottery::point(1, 3)}, {Lottery::point(2, 3)}};
  ChoiceCorrespondence c(0, 0, universe);
  for (Menu m = 1; m <= 7; ++m) c.set(m, m);
  c.set(bit(0) | bit(1), bit(1));
  c.set(7, bit(0) | bit(2));
  // The direct menu is {a} alone; IC holds trivially there.
  ChoiceProfile C{{c}};
  CHECK(check_ic_choice(env, f, C, IcMode::IC).at(0).holds);
  CHECK(check_ic_choice(env, f, C, IcMode::QIC).at(0).holds);
}

TEST_CASE("literal CC plus IIA does not give IC without C(O) inside X") {
  // Acts a, b, c as bits 0, 1, 2.
  std::vector<Menu> C(8, 0);
  for (std::size_t k = 0; k < 3; ++k) C[bit(k)] = bit(k);
  C[bit(0) | bit(1)] = bit(0) | bit(1);
  C[bit(0) | bit(2)] = bit(2);
  C[bit(1) | bit(2)] = bit(1);
  C[7] = bit(0) | bit(1);
  REQUIRE(table_satisfies_iia(C, 3));
  const Menu O = 7, X = bit(0) | bit(2);
  CHECK((C[O] & bit(0)) != 0);  // a chosen from O
  CHECK(sub(X, O));
  CHECK((C[X] & bit(0)) == 0);  // a not chosen from X
  CHECK_FALSE(sub(C[O], X));
}

TEST_CASE("IIA with C(O) inside X inside O gives C(O) inside C(X), exhaustively") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Menu full = static_cast<Menu>((1u << n) - 1);
    for (const auto& t : all_tables(n)) {
      if (!table_satisfies_iia(t, n)) continue;
      for (Menu O = 1; O <= full; ++O) {
        for (Menu X = 1; X <= full; ++X) {
          if (sub(t[O], X) && sub(X, O)) CHECK(sub(t[O], t[X]));
        }
      }
    }
  }
}

TEST_CASE("IIA checks agree between the table and correspondence forms") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + k % 5;
    auto table = random_iia_table(rng, n);
    CHECK(table_satisfies_iia(table, n));
    std::vector<IAAct> universe;
    for (std::size_t a = 0; a < n; ++a) universe.push_back({Lottery::point(a, n)});
    ChoiceCorrespondence c(0, 0, universe);
    for (Menu m = 1; m <= c.full_menu(); ++m) c.set(m, table[m]);
    CHECK(check_iia(c).holds);
  }
  for (const auto& t : all_tables(3)) {
    ChoiceCorrespondence c(0, 0, {{Lottery::point(0, 3)}, {Lottery::point(1, 3)}, {Lottery::point(2, 3)}});
    for (Menu m = 1; m <= 7; ++m) c.set(m, t[m]);
    CHECK(check_iia(c).holds == table_satisfies_iia(t, 3));
  }
}

TEST_CASE("corollary sweep: literal form fails, strengthened form holds") {
  CorollarySweep s = choice_corollary_sweep(2000, 3);
  CHECK(s.hypothesis_met == 2000);
  CHECK(s.counterexamples > 0);
  CHECK(s.strengthened_met > 0);
  CHECK(s.strengthened_counterexamples == 0);
  CHECK(s.iia_rejected > 0);
  CorollarySweep again = choice_corollary_sweep(100, 3);
  CHECK(again.counterexamples == 2);
  CHECK(again.strengthened_met == 90);
  CHECK(again.strengthened_counterexamples == 0);
}
