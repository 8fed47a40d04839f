#include "mechlab/properties.hpp"

#include "mechlab/random.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace mechlab {

namespace {

std::string play_key(const StrategyProfile& sp) {
  std::string key;
  for (const auto& d : sp.play) {
    for (const auto& [s, p] : d.entries()) {
      key += std::to_string(s);
      key += ':';
      key += p.get_str();
      key += ' ';
    }
    key += '|';
  }
  return key;
}

// Lottery reached when i plays `own` and opponents follow conjecture d.
Lottery mimic_lottery(const Mechanism& mech, const MixedRadix& as, std::size_t i,
                      const MixedAction& own, const Dist& d, std::size_t na) {
  Lottery l;
  l.prob.assign(na, Rational(0));
  for (std::size_t a = 0; a < own.size(); ++a) {
    if (own[a] == 0) continue;
    for (const auto& [s_opp, q] : d.entries()) {
      const Lottery& m = mech.outcome[as.merge(i, a, s_opp)];
      Rational w = own[a] * q;
      for (std::size_t o = 0; o < na; ++o) {
        if (m.prob[o] != 0) l.prob[o] += w * m.prob[o];
      }
    }
  }
  return l;
}

}  // namespace

PropertyVerdict check_wsc(const Environment& env, const Mechanism& mech, const SolutionSet& solset) {
  PropertyVerdict v;
  v.property = "wsc";
  std::vector<SCF> outcomes;
  for (const auto& sp : solset.profiles) outcomes.push_back(outcome_of(env, mech, sp));
  if (solset.empty()) {
    v.vacuous = true;
    v.note = "solution set is empty";
  }
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      CellWitness c{i, t, std::nullopt};
      for (std::size_t p = 0; p < outcomes.size(); ++p) {
        if (bic_at_cell(env, outcomes[p], i, t)) {
          c.witness = p;
          break;
        }
      }
      if (!c.witness && !solset.empty() && v.holds) {
        v.holds = false;
        v.profile = 0;
        for (std::size_t r = 0; r < env.num_types(i); ++r) {
          if (r == t) continue;
          BicViolation bv = bic_deviation(env, outcomes[0], i, t, r);
          if (!v.violation || bv.gap > v.violation->gap) v.violation = std::move(bv);
        }
      }
      if (solset.empty()) c.witness = std::nullopt;
      v.cells.push_back(c);
    }
  }
  return v;
}

PropertyVerdict check_twsc(const Environment& env, const Mechanism& mech, const SolutionSet& solset) {
  PropertyVerdict v;
  v.property = "twsc";
  if (solset.empty()) {
    v.vacuous = true;
    v.note = "solution set is empty";
    return v;
  }
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  const std::size_t na = env.num_outcomes();
  for (std::size_t p = 0; p < solset.size(); ++p) {
    const StrategyProfile& sp = solset.profiles[p];
    if (!sp.product_form) throw NotCheckable("twsc requires product-form profiles");
    SCF f = outcome_of(env, mech, sp);
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      MixedRadix ot = ts.without(i);
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        Expectation e = conjecture_from_profile(env, mech, sp, i, t);
        Rational truthful = 0;
        for (std::size_t k = 0; k < ot.size(); ++k) {
          std::size_t tt = ts.merge(i, t, k);
          truthful += env.beliefs[i][t][k] * lottery_utility(env, i, f.value[tt], tt);
        }
        for (std::size_t r = 0; r < env.num_types(i); ++r) {
          if (r == t) continue;
          Rational mimic = 0;
          for (std::size_t k = 0; k < ot.size(); ++k) {
            std::size_t tt = ts.merge(i, t, k);
            Lottery l = mimic_lottery(mech, as, i, sp.marginals[i][r], e.conjecture[k], na);
            mimic += env.beliefs[i][t][k] * lottery_utility(env, i, l, tt);
          }
          if (mimic > truthful) {
            v.holds = false;
            v.profile = p;
            v.violation = BicViolation{i, t, r, truthful, mimic, mimic - truthful};
            return v;
          }
        }
      }
    }
  }
  return v;
}

StrategyProfile pair_profile(const Environment& env, const Mechanism& mech,
                             const StrategyProfile& sigma, const Expectation& e) {
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  const std::size_t i = e.agent;
  std::vector<Dist> play;
  play.reserve(ts.size());
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const MixedAction& own = sigma.marginals.at(i).at(ts.digit(t, i));
    const Dist& opp = e.conjecture.at(ts.project_out(t, i));
    std::vector<Dist::Entry> entries;
    for (std::size_t a = 0; a < own.size(); ++a) {
      if (own[a] == 0) continue;
      for (const auto& [s, q] : opp.entries()) entries.emplace_back(as.merge(i, a, s), own[a] * q);
    }
    play.push_back(Dist::from_entries(std::move(entries)));
  }
  return make_joint_profile(std::move(play));
}

PropertyVerdict check_sc(const Environment& env, const Mechanism& mech, const SolutionSet& solset) {
  if (!solset.has_full_provenance()) {
    throw NotCheckable("sc requires a recorded expectation for every solution");
  }
  PropertyVerdict v;
  v.property = "sc";
  if (solset.empty()) {
    v.vacuous = true;
    v.note = "solution set is empty";
    return v;
  }
  PayoffTable pt(env, mech);
  for (std::size_t p = 0; p < solset.size(); ++p) {
    const StrategyProfile& sp = solset.profiles[p];
    if (!sp.product_form) throw NotCheckable("sc requires product-form profiles");
    const ExpectationProfile& ep = *solset.provenance[p];
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        auto br = best_replies(pt, i, t, ep[i][t]);
        const MixedAction& own = sp.marginals[i][t];
        for (std::size_t a = 0; a < own.size(); ++a) {
          if (own[a] != 0 && !std::binary_search(br.begin(), br.end(), a)) {
            v.holds = false;
            v.profile = p;
            v.note = "response is not a best reply to its recorded expectation";
            v.cells.push_back({i, t, std::nullopt});
            return v;
          }
        }
      }
    }
  }
  std::unordered_set<std::string> members;
  for (const auto& sp : solset.profiles) members.insert(play_key(sp));
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      CellWitness c{i, t, std::nullopt};
      for (std::size_t p = 0; p < solset.size(); ++p) {
        StrategyProfile pair = pair_profile(env, mech, solset.profiles[p], (*solset.provenance[p])[i][t]);
        if (members.count(play_key(pair))) {
          c.witness = p;
          break;
        }
      }
      if (!c.witness && v.holds) {
        v.holds = false;
        v.note = "no recorded response/expectation pair is a solution";
      }
      v.cells.push_back(c);
    }
  }
  return v;
}

std::vector<CellWitness> partial_bic_witnesses(const Environment& env, const SCS& F) {
  std::vector<CellWitness> out;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      CellWitness c{i, t, std::nullopt};
      for (std::size_t m = 0; m < F.size(); ++m) {
        if (bic_at_cell(env, F[m], i, t)) {
          c.witness = m;
          break;
        }
      }
      out.push_back(c);
    }
  }
  return out;
}

namespace {

std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, const InstanceSizes& sizes) {
  if (sizes.agents < 1 || sizes.types < 1 || sizes.actions < 1 || sizes.outcomes < 1) {
    throw InputError("sizes-invalid", "every size must be at least 1", "sizes");
  }
  std::mt19937_64 rng(seed);
  RandomInstance ri;
  Environment& env = ri.env;
  env.agents = labels("i", sizes.agents);
  env.types.assign(sizes.agents, labels("t", sizes.types));
  env.outcomes = labels("o", sizes.outcomes);
  MixedRadix ts = env.type_space();
  env.beliefs.resize(sizes.agents);
  for (std::size_t i = 0; i < sizes.agents; ++i) {
    std::size_t m = ts.without(i).size();
    for (std::size_t t = 0; t < sizes.types; ++t) {
      // Integer weights in [1, 10] keep every entry at least 1/(10 m).
      std::vector<Rational> row;
      unsigned long total = 0;
      std::vector<unsigned long> w(m);
      for (auto& x : w) {
        x = 1 + uniform_below(rng, 10);
        total += x;
      }
      for (auto x : w) row.emplace_back(x, total);
      for (auto& q : row) q.canonicalize();
      env.beliefs[i].push_back(std::move(row));
    }
  }
  env.utility.resize(sizes.agents);
  for (std::size_t i = 0; i < sizes.agents; ++i) {
    env.utility[i].resize(sizes.outcomes);
    for (auto& row : env.utility[i]) {
      for (std::size_t t = 0; t < ts.size(); ++t) {
        row.emplace_back(static_cast<long>(uniform_below(rng, 7)) - 3);
      }
    }
  }
  Mechanism& mech = ri.mech;
  mech.actions.assign(sizes.agents, labels("a", sizes.actions));
  MixedRadix as = mech.action_space();
  for (std::size_t s = 0; s < as.size(); ++s) {
    std::size_t o1 = uniform_below(rng, sizes.outcomes);
    if (uniform_below(rng, 5) == 0 && sizes.outcomes > 1) {
      std::size_t o2 = uniform_below(rng, sizes.outcomes);
      Lottery l;
      l.prob.assign(sizes.outcomes, Rational(0));
      l.prob[o1] += Rational(1, 2);
      l.prob[o2] += Rational(1, 2);
      mech.outcome.push_back(std::move(l));
    } else {
      mech.outcome.push_back(Lottery::point(o1, sizes.outcomes));
    }
  }
  ri.scf.name = "random";
  for (std::size_t t = 0; t < ts.size(); ++t) {
    ri.scf.value.push_back(Lottery::point(uniform_below(rng, sizes.outcomes), sizes.outcomes));
  }
  return ri;
}

}  // namespace mechlab
