#include <omp.h>

#include <sstream>

#include "mechlab/properties.hpp"

namespace mechlab {

namespace {

struct EngineRun {
  std::string name;
  SolutionSet sol;
};

EngineRun run_engine(const std::string& name, const Environment& env, const Mechanism& mech) {
  if (name == "bne") return {name, solve_pure_bne(env, mech, Exec::Serial)};
  if (name == "levelk") return {name, solve_level_k(env, mech, sweep_level_k_config()).solutions};
  if (name == "icr") return {name, solve_rationalizable(env, mech, std::nullopt, Exec::Serial).solutions};
  if (name == "cursed") return {name, solve_cursed(env, mech, CursedConfig{Rational(1, 2)}, Exec::Serial)};
  throw std::invalid_argument("unknown engine " + name);
}

bool all_witnessed(const std::vector<CellWitness>& cells) {
  for (const auto& c : cells) {
    if (!c.witness) return false;
  }
  return true;
}

bool all_bic(const Environment& env, const SCS& F) {
  for (const auto& f : F) {
    if (!check_bic(env, f).holds) return false;
  }
  return true;
}

bool type_independent(const SolutionSet& s) {
  for (const auto& p : s.provenance) {
    if (!p) return false;
    for (const auto& per_agent : *p) {
      for (const auto& e : per_agent) {
        if (e.conjecture != per_agent.front().conjecture) return false;
      }
    }
  }
  return true;
}

std::vector<std::string> engines_for(TheoremId t) {
  switch (t) {
    case TheoremId::T1:
    case TheoremId::T3: return {"bne", "levelk", "icr"};
    case TheoremId::T2: return {"levelk", "icr"};
    case TheoremId::T4: return {"bne", "levelk", "icr", "cursed"};
    case TheoremId::T5: return {"bne", "levelk"};
  }
  return {};
}

bool two_directions(TheoremId t) {
  return t == TheoremId::T1 || t == TheoremId::T3 || t == TheoremId::T4;
}

std::vector<SweepCheck> evaluate(TheoremId theorem, const EngineRun& run, const Environment& env,
                                 const Mechanism& mech) {
  const SolutionSet& sol = run.sol;
  SCS F = outcome_set(env, mech, sol);
  const bool nonempty = !sol.empty();
  const bool single = nonempty && F.size() == 1;
  std::vector<SweepCheck> out;
  auto add = [&](const std::string& dir, bool hyp, auto&& conclusion) {
    SweepCheck c{run.name + (dir.empty() ? "" : "." + dir), hyp, true};
    if (hyp) c.conclusion = conclusion();
    out.push_back(c);
  };
  switch (theorem) {
    case TheoremId::T1: {
      bool wsc = check_wsc(env, mech, sol).holds;
      bool bic = single && check_bic(env, F[0]).holds;
      add("fwd", single && wsc, [&] { return bic; });
      add("conv", single && bic, [&] { return wsc; });
      break;
    }
    case TheoremId::T2: {
      bool bic = single && check_bic(env, F[0]).holds;
      add("", bic, [&] { return check_sirbic(env, F[0]).holds; });
      break;
    }
    case TheoremId::T3: {
      bool wsc = check_wsc(env, mech, sol).holds;
      bool partial = all_witnessed(partial_bic_witnesses(env, F));
      add("fwd", nonempty && wsc, [&] { return partial; });
      add("conv", nonempty && partial, [&] { return wsc; });
      break;
    }
    case TheoremId::T4: {
      bool twsc = check_twsc(env, mech, sol).holds;
      bool bic = all_bic(env, F);
      add("fwd", nonempty && twsc, [&] { return bic; });
      add("conv", nonempty && bic, [&] { return twsc; });
      break;
    }
    case TheoremId::T5: {
      bool sc = nonempty && check_sc(env, mech, sol).holds;
      add("", sc && type_independent(sol), [&] {
        for (std::size_t i = 0; i < env.num_agents(); ++i) {
          bool found = false;
          for (const auto& f : F) {
            bool ok = true;
            for (std::size_t t = 0; t < env.num_types(i) && ok; ++t) ok = bic_at_cell(env, f, i, t);
            if (ok) {
              found = true;
              break;
            }
          }
          if (!found) return false;
        }
        return true;
      });
      break;
    }
  }
  return out;
}

std::string check_name(const std::string& engine, const std::string& dir) {
  return dir.empty() ? engine : engine + "." + dir;
}

}  // namespace

LevelKConfig sweep_level_k_config() { return LevelKConfig{2, AnchorSpec{}}; }

std::optional<TheoremId> parse_theorem(const std::string& s) {
  if (s == "T1") return TheoremId::T1;
  if (s == "T2") return TheoremId::T2;
  if (s == "T3") return TheoremId::T3;
  if (s == "T4") return TheoremId::T4;
  if (s == "T5") return TheoremId::T5;
  return std::nullopt;
}

std::string to_string(TheoremId t) {
  switch (t) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3: return "T3";
    case TheoremId::T4: return "T4";
    case TheoremId::T5: return "T5";
  }
  return "?";
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  // splitmix64 finaliser
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SweepReport validate_theorem(TheoremId theorem, std::size_t trials, const InstanceSizes& sizes,
                             std::uint64_t seed, Exec exec, std::size_t first_trial) {
  SweepReport rep;
  rep.theorem = theorem;
  rep.base_seed = seed;
  rep.sizes = sizes;
  for (const auto& e : engines_for(theorem)) {
    if (two_directions(theorem)) {
      rep.check_names.push_back(check_name(e, "fwd"));
      rep.check_names.push_back(check_name(e, "conv"));
    } else {
      rep.check_names.push_back(e);
    }
  }
  rep.rows.resize(trials);
  auto work = [&](std::size_t k) {
    SweepTrial& row = rep.rows[k];
    row.index = first_trial + k;
    row.seed = trial_seed(seed, row.index);
    try {
      RandomInstance ri = random_instance(row.seed, sizes);
      for (const auto& e : engines_for(theorem)) {
        EngineRun run = run_engine(e, ri.env, ri.mech);
        auto checks = evaluate(theorem, run, ri.env, ri.mech);
        row.checks.insert(row.checks.end(), checks.begin(), checks.end());
      }
      bool any_hyp = false, bad = false;
      for (const auto& c : row.checks) {
        any_hyp = any_hyp || c.hypothesis;
        bad = bad || (c.hypothesis && !c.conclusion);
      }
      row.status = bad ? "counterexample" : any_hyp ? "pass" : "hypothesis-not-met";
    } catch (const ResourceError&) {
      row.checks.clear();
      row.status = "resource-error";
    }
  };
  if (exec == Exec::Serial) {
    for (std::size_t k = 0; k < trials; ++k) work(k);
  } else {
    const long long n = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long k = 0; k < n; ++k) work(static_cast<std::size_t>(k));
  }
  for (const auto& name : rep.check_names) rep.hypothesis_met[name] = 0;
  for (const auto& row : rep.rows) {
    if (row.status == "counterexample") ++rep.counterexamples;
    for (const auto& c : row.checks) {
      if (c.hypothesis) ++rep.hypothesis_met[c.name];
    }
  }
  rep.status = rep.counterexamples == 0 ? "pass" : "fail";
  return rep;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os << "trial,seed";
  for (const auto& n : check_names) os << ',' << n << "_hyp," << n << "_ok";
  os << ",status\n";
  for (const auto& row : rows) {
    os << row.index << ',' << row.seed;
    for (const auto& n : check_names) {
      const SweepCheck* found = nullptr;
      for (const auto& c : row.checks) {
        if (c.name == n) found = &c;
      }
      if (found) {
        os << ',' << (found->hypothesis ? 1 : 0) << ',' << (found->conclusion ? 1 : 0);
      } else {
        os << ",,";
      }
    }
    os << ',' << row.status << '\n';
  }
  return os.str();
}

std::vector<ImplicationCheck> audit_implications(const Environment& env, const Mechanism& mech,
                                                 const SCF& scf) {
  std::vector<ImplicationCheck> out;
  std::vector<EngineRun> runs;
  for (const char* e : {"bne", "levelk", "icr", "cursed"}) runs.push_back(run_engine(e, env, mech));

  SCS candidates{scf};
  for (const auto& r : runs) {
    for (auto& f : outcome_set(env, mech, r.sol)) candidates.push_back(std::move(f));
  }
  ImplicationCheck sir{"sirbic=>bic", false, true};
  for (const auto& f : candidates) {
    if (check_sirbic(env, f).holds) {
      sir.applicable = true;
      sir.holds = sir.holds && check_bic(env, f).holds;
    }
  }
  out.push_back(sir);

  for (const auto& r : runs) {
    SCS F = outcome_set(env, mech, r.sol);
    bool nonempty = !r.sol.empty();
    bool wsc = check_wsc(env, mech, r.sol).holds;
    bool twsc = check_twsc(env, mech, r.sol).holds;
    out.push_back({"twsc=>wsc." + r.name, nonempty && twsc, !(nonempty && twsc) || wsc});
    bool sc = false;
    try {
      sc = nonempty && check_sc(env, mech, r.sol).holds;
    } catch (const NotCheckable&) {
      sc = false;
    }
    out.push_back({"sc=>wsc." + r.name, sc, !sc || wsc});
    bool single = nonempty && F.size() == 1;
    bool iff = !single || (twsc == (wsc && check_bic(env, F[0]).holds));
    out.push_back({"singleton-twsc-iff." + r.name, single, iff});
  }
  SolutionSet c0 = solve_cursed(env, mech, CursedConfig{0}, Exec::Serial);
  out.push_back({"cursed0=bne", true, c0.profiles == runs[0].sol.profiles});
  return out;
}

}  // namespace mechlab
