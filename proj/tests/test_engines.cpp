#include <doctest.h>

#include <set>

#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/properties.hpp"
#include "oracles.hpp"

using namespace mechlab;

namespace {

std::set<oracle::PureProfile> pure_set(const SolutionSet& s) {
  std::set<oracle::PureProfile> out;
  for (const auto& p : s.profiles) {
    REQUIRE(p.pure);
    out.insert(*p.pure);
  }
  return out;
}

}  // namespace

TEST_CASE("3x3 game: unique pure BNE (A,A)") {
  auto g = fixtures::three_by_three();
  auto s = solve_pure_bne(g.env, g.mech);
  CHECK(pure_set(s) == std::set<oracle::PureProfile>{{{0}, {0}}});
}

TEST_CASE("3x3 game: every action is rationalizable, restricted beliefs exclude A") {
  auto g = fixtures::three_by_three();
  auto r = solve_rationalizable(g.env, g.mech, std::nullopt);
  CHECK(r.solutions.size() == 9);
  auto d = solve_rationalizable(g.env, g.mech, DeltaRestriction::from_action_sets(g.env, g.mech, {{1, 2}, {1, 2}}));
  CHECK(d.solutions.size() == 4);
  for (const auto& p : d.solutions.profiles) {
    CHECK(p.pure->at(0)[0] != 0);
    CHECK(p.pure->at(1)[0] != 0);
  }
}

TEST_CASE("cursed game: unique CE plays A at type 1 and B at type -1") {
  auto g = fixtures::cursed_game(Rational(3));
  auto s = solve_cursed(g.env, g.mech, CursedConfig{Rational(1, 2)});
  CHECK(pure_set(s) == std::set<oracle::PureProfile>{{{0, 1}, {0, 1}}});
}

TEST_CASE("cursed with chi = 0 equals BNE setwise") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{});
    CHECK(pure_set(solve_cursed(ri.env, ri.mech, CursedConfig{0})) == pure_set(solve_pure_bne(ri.env, ri.mech)));
  }
}

TEST_CASE("BNE matches the naive checker") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    InstanceSizes sz{2, 1 + seed % 2, 2 + seed % 2, 2 + seed % 2};
    auto ri = random_instance(seed, sz);
    CHECK(pure_set(solve_pure_bne(ri.env, ri.mech)) == oracle::naive_pure_bne(ri.env, ri.mech));
  }
}

TEST_CASE("ICR matches Fourier-Motzkin elimination") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    InstanceSizes sz{2, 1 + seed % 2, 2 + seed % 2, 3};
    auto ri = random_instance(1000 + seed, sz);
    auto r = solve_rationalizable(ri.env, ri.mech, std::nullopt);
    CHECK(r.surviving == oracle::icr_by_elimination(ri.env, ri.mech));
  }
}

TEST_CASE("serial and parallel kernels agree") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{2, 2, 3, 3});
    CHECK(solve_pure_bne(ri.env, ri.mech, Exec::Serial).profiles == solve_pure_bne(ri.env, ri.mech, Exec::Parallel).profiles);
    CHECK(solve_rationalizable(ri.env, ri.mech, std::nullopt, Exec::Serial).surviving ==
          solve_rationalizable(ri.env, ri.mech, std::nullopt, Exec::Parallel).surviving);
  }
}

TEST_CASE("every returned profile best-replies to its recorded conjecture") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto ri = random_instance(seed, InstanceSizes{});
    std::vector<SolutionSet> sets{solve_pure_bne(ri.env, ri.mech), solve_level_k(ri.env, ri.mech, sweep_level_k_config()).solutions,
                                  solve_rationalizable(ri.env, ri.mech, std::nullopt).solutions};
    for (const auto& s : sets) {
      for (std::size_t p = 0; p < s.size(); ++p) {
        REQUIRE(s.provenance[p]);
        for (std::size_t i = 0; i < ri.env.num_agents(); ++i) {
          for (std::size_t t = 0; t < ri.env.num_types(i); ++t) {
            auto br = best_replies(ri.env, ri.mech, i, t, (*s.provenance[p])[i][t]);
            const auto& m = s.profiles[p].marginals[i][t];
            for (std::size_t a = 0; a < m.size(); ++a) {
              if (m[a] > 0) CHECK(std::find(br.begin(), br.end(), a) != br.end());
            }
          }
        }
      }
    }
  }
}

TEST_CASE("level-k strategies follow their witnesses level by level") {
  auto g = fixtures::three_by_three();
  LevelKConfig cfg;
  cfg.k_max = 3;
  auto r = solve_level_k(g.env, g.mech, cfg);
  REQUIRE(r.levels.size() == 3);
  // Against a uniform opponent every action earns -2/3.
  for (std::size_t i = 0; i < 2; ++i) CHECK(r.levels[0][i].size() == 3);
  CHECK_FALSE(r.solutions.empty());
}
