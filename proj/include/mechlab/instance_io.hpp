#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechlab/choice.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/epistemic.hpp"
#include "mechlab/game.hpp"

namespace mechlab {

// Choice data for one (agent, type) as written in the file. The correspondence
// is either the expected-utility maximiser or an explicit menu table.
struct ChoiceSpec {
  std::size_t agent = 0;
  std::size_t type = 0;
  bool expected_utility = false;
  std::vector<IAAct> universe;
  std::vector<std::pair<Menu, Menu>> table;  // (menu, chosen), in file order

  ChoiceCorrespondence build(const Environment& env) const;
  bool operator==(const ChoiceSpec& o) const {
    return agent == o.agent && type == o.type && expected_utility == o.expected_utility &&
           universe == o.universe && table == o.table;
  }
};

struct EngineSettings {
  std::optional<std::size_t> k_max;
  std::optional<AnchorSpec> anchor;
  std::optional<Rational> chi;
  std::optional<std::vector<std::vector<std::size_t>>> delta_actions;  // [j] allowed actions
};

struct Instance {
  Environment env;
  std::optional<Mechanism> mech;
  std::vector<SCF> scfs;  // "scf" first when present, then the "scs" members
  bool has_scf = false;   // scfs[0] came from the "scf" section
  std::optional<EpistemicModel> epistemic;
  std::vector<std::vector<std::string>> epistemic_names;  // [i][h_i]
  std::vector<ChoiceSpec> choice;
  EngineSettings settings;
};

bool same_instance(const Instance& a, const Instance& b);

// Parses and validates. Throws InputError carrying every diagnostic found;
// syntax errors carry line and column.
Instance parse_instance_text(const std::string& text, const std::string& source = "<memory>");
Instance parse_instance(const std::string& path);

// Canonical JSON text; parse_instance_text(serialize_instance(x)) == x.
std::string serialize_instance(const Instance& inst);

// Instance with only environment and mechanism.
Instance make_instance(Environment env, Mechanism mech);

}  // namespace mechlab
