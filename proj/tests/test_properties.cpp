#include <doctest.h>

#include <set>

#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/properties.hpp"

using namespace mechlab;

TEST_CASE("trial seeds are distinct over 1000 trials") {
  std::set<std::uint64_t> seen;
  for (std::size_t k = 0; k < 1000; ++k) seen.insert(trial_seed(7, k));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(7, 3) == trial_seed(7, 3));
  CHECK(trial_seed(7, 3) != trial_seed(8, 3));
}

TEST_CASE("random instances are deterministic and valid") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto a = random_instance(seed, InstanceSizes{});
    auto b = random_instance(seed, InstanceSizes{});
    CHECK(a.env.utility == b.env.utility);
    CHECK(a.mech.outcome == b.mech.outcome);
    CHECK(a.env.validate().empty());
    CHECK(a.mech.validate(a.env).empty());
  }
}

TEST_CASE("implication suite holds on sweep instances") {
  for (std::size_t k = 0; k < 150; ++k) {
    auto ri = random_instance(trial_seed(7, k), InstanceSizes{});
    for (const auto& c : audit_implications(ri.env, ri.mech, ri.scf)) {
      INFO(c.name << " at trial " << k);
      CHECK((!c.applicable || c.holds));
    }
  }
}

TEST_CASE("SIRBIC implies BIC on random SCFs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 2});
    if (check_sirbic(ri.env, ri.scf).holds) CHECK(check_bic(ri.env, ri.scf).holds);
  }
}

TEST_CASE("WSC on the fixtures") {
  auto g = fixtures::three_by_three();
  CHECK(check_wsc(g.env, g.mech, solve_pure_bne(g.env, g.mech)).holds);
  auto c = fixtures::cursed_game(Rational(3));
  auto ce = solve_cursed(c.env, c.mech, CursedConfig{Rational(1, 2)});
  auto v = check_wsc(c.env, c.mech, ce);
  CHECK_FALSE(v.holds);
  REQUIRE(v.violation);
  CHECK(v.violation->type == 0);
  CHECK(v.violation->truthful == Rational(-1, 2));
}

TEST_CASE("SC requires provenance") {
  auto g = fixtures::three_by_three();
  SolutionSet bare;
  bare.concept_tag = "bare";
  bare.profiles = solve_pure_bne(g.env, g.mech).profiles;
  bare.provenance.assign(bare.profiles.size(), std::nullopt);
  CHECK_THROWS_AS(check_sc(g.env, g.mech, bare), NotCheckable);
}

TEST_CASE("theorem sweeps find no counterexamples") {
  for (TheoremId t : {TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T5}) {
    SweepReport r = validate_theorem(t, 120, InstanceSizes{}, 11);
    INFO(to_string(t));
    CHECK(r.counterexamples == 0);
    std::size_t met = 0;
    for (const auto& [name, n] : r.hypothesis_met) met += n;
    CHECK(met > 0);
  }
}

TEST_CASE("sweeps are deterministic across execution modes and offsets") {
  SweepReport a = validate_theorem(TheoremId::T1, 40, InstanceSizes{}, 5, Exec::Serial);
  SweepReport b = validate_theorem(TheoremId::T1, 40, InstanceSizes{}, 5, Exec::Parallel);
  CHECK(a.to_csv() == b.to_csv());
  SweepReport tail = validate_theorem(TheoremId::T1, 10, InstanceSizes{}, 5, Exec::Parallel, 30);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(tail.rows[k].seed == a.rows[30 + k].seed);
    CHECK(tail.rows[k].status == a.rows[30 + k].status);
  }
}

TEST_CASE("partial BIC witnesses pick a BIC member per cell") {
  auto g = fixtures::cursed_game(Rational(3));
  auto ce = solve_cursed(g.env, g.mech, CursedConfig{Rational(1, 2)});
  SCF bad = outcome_of(g.env, g.mech, ce.profiles[0]);
  SCF constant{"k", std::vector<Lottery>(4, Lottery::point(3, 4))};
  auto cells = partial_bic_witnesses(g.env, {bad, constant});
  for (const auto& c : cells) {
    REQUIRE(c.witness);
    CHECK(bic_at_cell(g.env, SCS{bad, constant}[*c.witness], c.agent, c.type));
  }
  CHECK_FALSE(partial_bic_witnesses(g.env, {bad})[0].witness);
}
