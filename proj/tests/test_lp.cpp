#include <doctest.h>

#include <random>

#include "mechlab/lp.hpp"
#include "mechlab/random.hpp"
#include "oracles.hpp"

using namespace mechlab;

namespace {

// Rows of the problem as A x <= b, including sign constraints, for the oracle.
std::vector<oracle::Ineq> as_inequalities(const lp::Problem& p, const std::vector<Rational>* objective_cap,
                                          const Rational& cap) {
  const std::size_t n = p.num_vars();
  std::vector<oracle::Ineq> rows;
  for (const auto& c : p.constraints()) {
    oracle::Ineq r{std::vector<Rational>(n), c.rhs};
    for (const auto& t : c.terms) r.a[t.var] += t.coef;
    oracle::Ineq neg{r.a, -r.b};
    for (auto& x : neg.a) x = -x;
    if (c.sense != lp::Sense::GreaterEq) rows.push_back(r);
    if (c.sense != lp::Sense::LessEq) rows.push_back(neg);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (p.kinds()[v] != lp::VarKind::NonNegative) continue;
    oracle::Ineq r{std::vector<Rational>(n), 0};
    r.a[v] = -1;
    rows.push_back(r);
  }
  if (objective_cap) rows.push_back({*objective_cap, cap});
  return rows;
}

lp::Problem random_problem(std::mt19937_64& rng) {
  lp::Problem p;
  const std::size_t n = 2 + uniform_below(rng, 3);
  const std::size_t m = 2 + uniform_below(rng, 3);
  for (std::size_t v = 0; v < n; ++v) p.add_variable(uniform_below(rng, 4) == 0 ? lp::VarKind::Free : lp::VarKind::NonNegative);
  auto coef = [&] { return Rational(static_cast<long>(uniform_below(rng, 7)) - 3); };
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<lp::Term> terms;
    for (std::size_t v = 0; v < n; ++v) terms.push_back({v, coef()});
    auto sense = static_cast<lp::Sense>(uniform_below(rng, 3));
    p.add_constraint(terms, sense, coef() * 2);
  }
  std::vector<lp::Term> obj;
  for (std::size_t v = 0; v < n; ++v) obj.push_back({v, coef()});
  // Bound the region so that most problems have an optimum.
  for (std::size_t v = 0; v < n; ++v) {
    p.add_constraint({{v, Rational(1)}}, lp::Sense::LessEq, Rational(5));
    p.add_constraint({{v, Rational(1)}}, lp::Sense::GreaterEq, Rational(-5));
  }
  p.set_objective(obj);
  return p;
}

}  // namespace

TEST_CASE("simplex verdicts carry verifiable certificates and agree with Fourier-Motzkin") {
  std::mt19937_64 rng(2024);
  std::size_t optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    lp::Problem p = random_problem(rng);
    lp::Solution s = lp::solve(p);
    const bool feasible = oracle::fm_feasible(as_inequalities(p, nullptr, 0), p.num_vars());
    REQUIRE(s.status != lp::Status::Unbounded);
    if (s.status == lp::Status::Optimal) {
      ++optimal;
      CHECK(feasible);
      CHECK(lp::is_feasible_point(p, s.x));
      CHECK(lp::is_dual_feasible(p, s.dual));
      CHECK(lp::dual_bound(p, s.dual) == s.objective);
      CHECK(p.objective_value(s.x) == s.objective);
      CHECK(lp::verify_optimality(p, s.x, s.dual));
      // Nothing strictly better is feasible.
      std::vector<Rational> c = p.objective();
      c.resize(p.num_vars());
      CHECK_FALSE(oracle::fm_feasible(as_inequalities(p, &c, s.objective - Rational(1, 1000)), p.num_vars()));
    } else {
      ++infeasible;
      CHECK_FALSE(feasible);
      CHECK(lp::verify_infeasibility(p, s.dual));
    }
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 10);
}

TEST_CASE("certificates are rejected when perturbed") {
  lp::Problem p;
  auto x = p.add_variable(lp::VarKind::NonNegative);
  p.add_constraint({{x, Rational(1)}}, lp::Sense::GreaterEq, Rational(2));
  p.add_constraint({{x, Rational(1)}}, lp::Sense::LessEq, Rational(1));
  lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Infeasible);
  CHECK(lp::verify_infeasibility(p, s.dual));
  CHECK_FALSE(lp::verify_infeasibility(p, std::vector<Rational>(s.dual.size(), Rational(0))));
}

TEST_CASE("degenerate problem terminates under Bland's rule") {
  lp::Problem p;
  std::vector<std::size_t> v;
  for (int k = 0; k < 4; ++k) v.push_back(p.add_variable(lp::VarKind::NonNegative));
  // Beale's cycling example.
  p.add_constraint({{v[0], Rational(1, 4)}, {v[1], Rational(-8)}, {v[2], Rational(-1)}, {v[3], Rational(9)}}, lp::Sense::LessEq, 0);
  p.add_constraint({{v[0], Rational(1, 2)}, {v[1], Rational(-12)}, {v[2], Rational(-1, 2)}, {v[3], Rational(3)}}, lp::Sense::LessEq, 0);
  p.add_constraint({{v[2], Rational(1)}}, lp::Sense::LessEq, 1);
  p.set_objective({{v[0], Rational(-3, 4)}, {v[1], Rational(20)}, {v[2], Rational(-1, 2)}, {v[3], Rational(6)}});
  lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Rational(-5, 4));
  CHECK(lp::verify_optimality(p, s.x, s.dual));
}
