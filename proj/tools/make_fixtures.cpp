// Writes the bundled instance files under the given directory.
#include <fstream>
#include <iostream>
#include <string>

#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/epistemic.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/instance_io.hpp"

using namespace mechlab;

namespace {

void write(const std::string& dir, const std::string& name, const Instance& inst) {
  std::ofstream out(dir + "/" + name);
  out << serialize_instance(inst);
  std::cout << dir << "/" << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures DIR\n";
    return 2;
  }
  const std::string dir = argv[1];

  auto g = fixtures::three_by_three();
  write(dir, "three_by_three.json", make_instance(g.env, g.mech));

  Instance delta = make_instance(g.env, g.mech);
  delta.settings.delta_actions = std::vector<std::vector<std::size_t>>{{1, 2}, {1, 2}};
  write(dir, "three_by_three_delta.json", delta);

  Instance epi = make_instance(g.env, g.mech);
  SolutionSet bne = solve_pure_bne(g.env, g.mech);
  epi.epistemic = build_model_from_witnesses(g.env, g.mech, find_witness_family(g.env, g.mech, bne));
  for (std::size_t i = 0; i < g.env.num_agents(); ++i) {
    epi.epistemic_names.emplace_back();
    for (std::size_t h = 0; h < epi.epistemic->num_epistemic_types(i); ++h) {
      epi.epistemic_names[i].push_back("h" + std::to_string(h));
    }
  }
  write(dir, "three_by_three_epistemic.json", epi);

  auto c = fixtures::cursed_game(Rational(3));
  Instance cursed = make_instance(c.env, c.mech);
  cursed.settings.chi = Rational(1, 2);
  SolutionSet ce = solve_cursed(c.env, c.mech, CursedConfig{Rational(1, 2)});
  SCF f = outcome_of(c.env, c.mech, ce.profiles.at(0));
  f.name = "cursed-outcome";
  cursed.scfs.push_back(f);
  cursed.has_scf = true;
  write(dir, "cursed.json", cursed);

  auto k = fixtures::constant_mechanism(2, 2, 2);
  Instance constant = make_instance(k.env, k.mech);
  SCF cf{"constant", std::vector<Lottery>(k.env.type_space().size(), Lottery::point(0, 2))};
  constant.scfs.push_back(cf);
  constant.has_scf = true;
  write(dir, "constant_scf.json", constant);

  auto s = fixtures::single_agent();
  Instance single = make_instance(s.env, s.mech);
  ChoiceSpec spec;
  spec.universe = {{Lottery::point(0, 2)}, {Lottery::point(1, 2)}};
  spec.table = {{1, 1}, {2, 2}, {3, 1}};
  single.choice.push_back(spec);
  single.scfs.push_back(SCF{"pick-x", {Lottery::point(0, 2)}});
  single.has_scf = true;
  write(dir, "single_agent_choice.json", single);
  return 0;
}
