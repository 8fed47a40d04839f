#include <doctest.h>

#include <random>

#include "mechlab/engines.hpp"
#include "mechlab/epistemic.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/instance_io.hpp"
#include "mechlab/properties.hpp"
#include "oracles.hpp"

using namespace mechlab;

namespace {

Event complement(const Event& e) {
  Event c(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) c[k] = !e[k];
  return c;
}

}  // namespace

TEST_CASE("events agree with a direct two-agent recomputation") {
  std::size_t nonempty_sol = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 3});
    SolutionSet sol = seed % 2 ? solve_rationalizable(ri.env, ri.mech, std::nullopt).solutions
                               : solve_pure_bne(ri.env, ri.mech);
    std::mt19937_64 rng(seed);
    EpistemicModel m = random_epistemic_model(ri.env, ri.mech, rng);
    EpistemicAnalysis a(ri.env, ri.mech, m, sol, Exec::Serial);
    EpistemicAnalysis b(ri.env, ri.mech, m, sol, Exec::Parallel);
    oracle::EpistemicEvents o = oracle::two_agent_events(ri.env, ri.mech, m, sol);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(a.W(i) == o.W[i]);
      CHECK(a.RAT(i) == o.RAT[i]);
      CHECK(a.TT(i) == o.TT[i]);
      CHECK(a.PM(i) == o.PM[i]);
      CHECK(a.SOL(i) == o.SOL[i]);
      CHECK(a.SOL(i) == event_and(a.TT(i), a.PM(i)));
      CHECK(b.SOL(i) == a.SOL(i));
      CHECK(b.W(i) == a.W(i));
      CHECK(b.RAT(i) == a.RAT(i));
      for (bool x : a.SOL(i)) nonempty_sol += x;
    }
  }
  CHECK(nonempty_sol > 0);
}

TEST_CASE("lambda marginals and conditionals are consistent") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{seed % 3 == 0 ? 3u : 2u, 2, 2, 3});
    std::mt19937_64 rng(seed + 1000);
    EpistemicModel m = random_epistemic_model(ri.env, ri.mech, rng);
    EpistemicAnalysis a(ri.env, ri.mech, m, solve_pure_bne(ri.env, ri.mech));
    for (std::size_t i = 0; i < ri.env.num_agents(); ++i) {
      for (std::size_t h = 0; h < m.num_epistemic_types(i); ++h) {
        const auto& joint = a.lambda_joint(i, h);
        Rational total = 0;
        for (std::size_t k = 0; k < joint.size(); ++k) {
          total += a.lambda_marginal(i, h, k);
          auto c = a.lambda_conditional(i, h, k);
          CHECK(c.has_value() == (a.lambda_marginal(i, h, k) != 0));
          if (c) CHECK(c->total() == 1);
        }
        CHECK(total == 1);
      }
    }
  }
}

TEST_CASE("probability-one belief operator is monotone and idempotent") {
  std::mt19937_64 draw(99);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 3});
    std::mt19937_64 rng(seed + 7);
    EpistemicModel m = random_epistemic_model(ri.env, ri.mech, rng);
    EpistemicAnalysis a(ri.env, ri.mech, m, solve_pure_bne(ri.env, ri.mech));
    const std::size_t N = a.states().size();
    Event E(N), F(N);
    for (std::size_t k = 0; k < N; ++k) {
      E[k] = draw() % 2;
      F[k] = E[k] || draw() % 2;
    }
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(event_subset(a.K(i, E), a.K(i, F)));
      CHECK(a.K(i, a.K(i, E)) == a.K(i, E));
      CHECK(a.K(i, Event(N, true)) == Event(N, true));
      CHECK(a.K(i, Event(N, false)) == Event(N, false));
      // K_i(E) and K_i(not E) are disjoint.
      CHECK(event_and(a.K(i, E), a.K(i, complement(E))) == Event(N, false));
    }
  }
}

TEST_CASE("3x3 fixture model satisfies both directions") {
  Instance inst = parse_instance(MECHLAB_FIXTURE_DIR "/three_by_three_epistemic.json");
  REQUIRE(inst.epistemic);
  SolutionSet bne = solve_pure_bne(inst.env, *inst.mech);
  auto fwd = validate_epistemic_theorems(inst.env, *inst.mech, bne, Direction::ModelToWitnesses, inst.epistemic);
  CHECK(fwd.hypothesis_met);
  CHECK(fwd.holds);
  auto back = validate_epistemic_theorems(inst.env, *inst.mech, bne, Direction::WitnessesToModel);
  CHECK(back.hypothesis_met);
  CHECK(back.holds);
  REQUIRE(back.model);
  for (const auto& c : back.cells) CHECK(c.sol_covers);
}

TEST_CASE("cursed play has no witness family for the mimicking cells") {
  auto g = fixtures::cursed_game(Rational(3));
  SolutionSet ce = solve_cursed(g.env, g.mech, CursedConfig{Rational(1, 2)});
  auto r = validate_epistemic_theorems(g.env, g.mech, ce, Direction::WitnessesToModel);
  CHECK_FALSE(r.hypothesis_met);
  std::size_t missing = 0;
  for (const auto& c : r.cells) missing += !c.hypothesis;
  CHECK(missing == 2);
  SolutionSet bne = solve_pure_bne(g.env, g.mech);
  auto ok = validate_epistemic_theorems(g.env, g.mech, bne, Direction::WitnessesToModel);
  CHECK(ok.hypothesis_met);
  CHECK(ok.holds);
}

TEST_CASE("random models: the extracted witnesses hold whenever the hypothesis does") {
  std::size_t met = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 2, 3});
    SolutionSet bne = solve_pure_bne(ri.env, ri.mech);
    std::mt19937_64 rng(seed + 31);
    EpistemicModel m = random_epistemic_model(ri.env, ri.mech, rng);
    auto r = validate_epistemic_theorems(ri.env, ri.mech, bne, Direction::ModelToWitnesses, m);
    for (const auto& c : r.cells) {
      if (!c.hypothesis) continue;
      ++met;
      CHECK(c.holds);
    }
  }
  CHECK(met > 0);
}

TEST_CASE("RAT* needs a response model") {
  auto g = fixtures::three_by_three();
  SolutionSet bne = solve_pure_bne(g.env, g.mech);
  auto back = validate_epistemic_theorems(g.env, g.mech, bne, Direction::WitnessesToModel);
  REQUIRE(back.model);
  EpistemicAnalysis a(g.env, g.mech, *back.model, bne);
  CHECK_THROWS_AS(a.RAT_star(0, ResponseModel::Unavailable), NotCheckable);
  CHECK(event_subset(a.RAT_star(0, response_model_for("bne")), a.RAT(0)));
  CHECK(response_model_for("cursed") == ResponseModel::Unavailable);
}
