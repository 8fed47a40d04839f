#pragma once

#include "mechlab/game.hpp"

namespace mechlab::fixtures {

struct Game {
  Environment env;
  Mechanism mech;
};

// Complete-information 3x3 game with actions A, B, C; (A,A) is the unique
// pure equilibrium while every action is rationalizable.
Game three_by_three();

// Two agents with types {1, -1} drawn uniformly; payoffs parametrised by zeta.
Game cursed_game(const Rational& zeta);

// One agent, one type, two actions mapped to two outcomes.
Game single_agent();

// Every action profile yields outcome 0.
Game constant_mechanism(std::size_t agents, std::size_t types, std::size_t actions);

// Identity mechanism: outcomes are the action profiles themselves.
Mechanism identity_mechanism(const Environment& env, const std::vector<std::vector<std::string>>& actions);

}  // namespace mechlab::fixtures
