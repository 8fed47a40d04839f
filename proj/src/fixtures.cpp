#include "mechlab/fixtures.hpp"

namespace mechlab::fixtures {

Mechanism identity_mechanism(const Environment& env,
                             const std::vector<std::vector<std::string>>& actions) {
  Mechanism m;
  m.actions = actions;
  MixedRadix as = m.action_space();
  for (std::size_t s = 0; s < as.size(); ++s) m.outcome.push_back(Lottery::point(s, env.num_outcomes()));
  return m;
}

Game three_by_three() {
  Game g;
  Environment& env = g.env;
  env.agents = {"R", "C"};
  env.types = {{"t"}, {"t"}};
  const std::vector<std::string> acts{"A", "B", "C"};
  for (const auto& r : acts) {
    for (const auto& c : acts) env.outcomes.push_back(r + c);
  }
  env.beliefs = {{{Rational(1)}}, {{Rational(1)}}};
  // Row-major (row action, column action) payoffs.
  const int row[9] = {2, -2, -2, -2, 1, -1, -2, -1, 1};
  const int col[9] = {2, -2, -2, -2, -1, 1, -2, 1, -1};
  env.utility.assign(2, std::vector<std::vector<Rational>>(9));
  for (std::size_t a = 0; a < 9; ++a) {
    env.utility[0][a] = {Rational(row[a])};
    env.utility[1][a] = {Rational(col[a])};
  }
  g.mech = identity_mechanism(env, {acts, acts});
  return g;
}

Game cursed_game(const Rational& zeta) {
  Game g;
  Environment& env = g.env;
  env.agents = {"R", "C"};
  env.types = {{"1", "-1"}, {"1", "-1"}};
  env.outcomes = {"AA", "AB", "BA", "BB"};
  env.beliefs = Environment::beliefs_from_prior(env.types, std::vector<Rational>(4, Rational(1, 4)));
  MixedRadix ts = env.type_space();
  const int value[2] = {1, -1};
  env.utility.assign(2, std::vector<std::vector<Rational>>(4, std::vector<Rational>(4)));
  for (std::size_t t = 0; t < ts.size(); ++t) {
    Rational tr = value[ts.digit(t, 0)];
    Rational tc = value[ts.digit(t, 1)];
    env.utility[0][0][t] = tr;
    env.utility[1][0][t] = tc;
    env.utility[0][1][t] = tr + zeta * tc;
    env.utility[1][1][t] = 0;
    env.utility[0][2][t] = 0;
    env.utility[1][2][t] = tc + zeta * tr;
    env.utility[0][3][t] = 0;
    env.utility[1][3][t] = 0;
  }
  g.mech = identity_mechanism(env, {{"A", "B"}, {"A", "B"}});
  return g;
}

Game single_agent() {
  Game g;
  g.env.agents = {"solo"};
  g.env.types = {{"t"}};
  g.env.outcomes = {"x", "y"};
  g.env.beliefs = {{{Rational(1)}}};
  g.env.utility = {{{Rational(1)}, {Rational(0)}}};
  g.mech = identity_mechanism(g.env, {{"X", "Y"}});
  return g;
}

Game constant_mechanism(std::size_t agents, std::size_t types, std::size_t actions) {
  Game g;
  Environment& env = g.env;
  for (std::size_t i = 0; i < agents; ++i) {
    env.agents.push_back("i" + std::to_string(i));
    std::vector<std::string> ts;
    for (std::size_t t = 0; t < types; ++t) ts.push_back("t" + std::to_string(t));
    env.types.push_back(ts);
  }
  env.outcomes = {"o0", "o1"};
  MixedRadix ts = env.type_space();
  env.beliefs = Environment::beliefs_from_prior(
      env.types, std::vector<Rational>(ts.size(), Rational(1, static_cast<unsigned long>(ts.size()))));
  env.utility.assign(agents, std::vector<std::vector<Rational>>(2));
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t t = 0; t < ts.size(); ++t) {
      env.utility[i][0].emplace_back(static_cast<long>(ts.digit(t, i)));
      env.utility[i][1].emplace_back(static_cast<long>(types - ts.digit(t, i)));
    }
  }
  Mechanism& m = g.mech;
  for (std::size_t i = 0; i < agents; ++i) {
    std::vector<std::string> as;
    for (std::size_t a = 0; a < actions; ++a) as.push_back("a" + std::to_string(a));
    m.actions.push_back(as);
  }
  for (std::size_t s = 0; s < m.action_space().size(); ++s) m.outcome.push_back(Lottery::point(0, 2));
  return g;
}

}  // namespace mechlab::fixtures
