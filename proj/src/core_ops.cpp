#include "mechlab/core_ops.hpp"

namespace mechlab {

PayoffTable::PayoffTable(const Environment& env, const Mechanism& mech)
    : env_(&env), mech_(&mech), types_(env.type_space()), actions_(mech.action_space()) {
  std::size_t n = env.num_agents();
  for (std::size_t i = 0; i < n; ++i) {
    opp_types_.push_back(types_.without(i));
    opp_actions_.push_back(actions_.without(i));
  }
  table_.assign(n * actions_.size() * types_.size(), Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < actions_.size(); ++s) {
      const Lottery& l = mech.outcome[s];
      for (std::size_t t = 0; t < types_.size(); ++t) {
        Rational v = 0;
        for (std::size_t a = 0; a < l.prob.size(); ++a) {
          if (l.prob[a] != 0) v += l.prob[a] * env.utility[i][a][t];
        }
        table_[(i * actions_.size() + s) * types_.size() + t] = v;
      }
    }
  }
}

Rational PayoffTable::interim(std::size_t i, std::size_t t_i, std::size_t s_i,
                              const Expectation& e) const {
  Rational total = 0;
  const MixedRadix& ot = opp_types_[i];
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t t = types_.merge(i, t_i, k);
    Rational inner = 0;
    for (const auto& [s_opp, q] : e.conjecture[k].entries()) {
      inner += q * u(i, actions_.merge(i, s_i, s_opp), t);
    }
    total += belief(i, t_i, k) * inner;
  }
  return total;
}

Rational PayoffTable::interim_pure(std::size_t i, std::size_t t_i, std::size_t s_i,
                                   const std::vector<std::size_t>& opp_action_by_type) const {
  Rational total = 0;
  const MixedRadix& ot = opp_types_[i];
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t t = types_.merge(i, t_i, k);
    total += belief(i, t_i, k) * u(i, actions_.merge(i, s_i, opp_action_by_type[k]), t);
  }
  return total;
}

Rational lottery_utility(const Environment& env, std::size_t i, const Lottery& l, std::size_t t) {
  Rational v = 0;
  for (std::size_t a = 0; a < l.prob.size(); ++a) {
    if (l.prob[a] != 0) v += l.prob[a] * env.utility[i][a][t];
  }
  return v;
}

Rational interim_expected_utility(const Environment& env, const Mechanism& mech, std::size_t i,
                                  std::size_t t_i, const MixedAction& own, const Expectation& e) {
  PayoffTable pt(env, mech);
  Rational total = 0;
  for (std::size_t a = 0; a < own.size(); ++a) {
    if (own[a] != 0) total += own[a] * pt.interim(i, t_i, a, e);
  }
  return total;
}

std::vector<std::size_t> best_replies(const PayoffTable& pt, std::size_t i, std::size_t t_i,
                                      const Expectation& e) {
  std::vector<std::size_t> best;
  Rational top;
  for (std::size_t a = 0; a < pt.mech().num_actions(i); ++a) {
    Rational v = pt.interim(i, t_i, a, e);
    if (best.empty() || v > top) {
      best.assign(1, a);
      top = v;
    } else if (v == top) {
      best.push_back(a);
    }
  }
  return best;
}

std::vector<std::size_t> best_replies(const Environment& env, const Mechanism& mech, std::size_t i,
                                      std::size_t t_i, const Expectation& e) {
  PayoffTable pt(env, mech);
  return best_replies(pt, i, t_i, e);
}

SCF outcome_of(const Environment& env, const Mechanism& mech, const StrategyProfile& sigma) {
  SCF f;
  f.value.reserve(sigma.play.size());
  std::size_t na = env.num_outcomes();
  for (const auto& d : sigma.play) {
    Lottery l;
    l.prob.assign(na, Rational(0));
    for (const auto& [s, p] : d.entries()) {
      const Lottery& m = mech.outcome[s];
      for (std::size_t a = 0; a < na; ++a) {
        if (m.prob[a] != 0) l.prob[a] += p * m.prob[a];
      }
    }
    f.value.push_back(std::move(l));
  }
  return f;
}

Rational misreport_gain(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i,
                        std::size_t t_i_report) {
  MixedRadix ts = env.type_space();
  MixedRadix ot = ts.without(i);
  Rational gain = 0;
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t t = ts.merge(i, t_i, k);
    std::size_t t_rep = ts.merge(i, t_i_report, k);
    gain += env.beliefs[i][t_i][k] *
            (lottery_utility(env, i, f.value[t_rep], t) - lottery_utility(env, i, f.value[t], t));
  }
  return gain;
}

bool bic_at_cell(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i) {
  for (std::size_t r = 0; r < env.num_types(i); ++r) {
    if (r != t_i && misreport_gain(env, f, i, t_i, r) > 0) return false;
  }
  return true;
}

BicViolation bic_deviation(const Environment& env, const SCF& f, std::size_t i, std::size_t t_i,
                            std::size_t r) {
  MixedRadix ts = env.type_space();
  MixedRadix ot = ts.without(i);
  BicViolation v{i, t_i, r, 0, 0, 0};
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t t = ts.merge(i, t_i, k);
    const Rational& p = env.beliefs[i][t_i][k];
    v.truthful += p * lottery_utility(env, i, f.value[t], t);
    v.misreport += p * lottery_utility(env, i, f.value[ts.merge(i, r, k)], t);
  }
  v.gap = v.misreport - v.truthful;
  return v;
}

BicReport check_bic(const Environment& env, const SCF& f) {
  BicReport rep;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t_i = 0; t_i < env.num_types(i); ++t_i) {
      for (std::size_t r = 0; r < env.num_types(i); ++r) {
        if (r == t_i) continue;
        BicViolation v = bic_deviation(env, f, i, t_i, r);
        if (v.gap > 0) {
          rep.holds = false;
          rep.violation = std::move(v);
          return rep;
        }
      }
    }
  }
  return rep;
}

SirbicReport check_sirbic(const Environment& env, const SCF& f) {
  SirbicReport rep;
  BicReport bic = check_bic(env, f);
  if (!bic.holds) {
    rep.holds = false;
    rep.failure = SirbicFailure::StrictViolation;
    rep.witness = bic.violation;
    return rep;
  }
  MixedRadix ts = env.type_space();
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    MixedRadix ot = ts.without(i);
    for (std::size_t t_i = 0; t_i < env.num_types(i); ++t_i) {
      for (std::size_t r = 0; r < env.num_types(i); ++r) {
        if (r == t_i) continue;
        BicViolation v = bic_deviation(env, f, i, t_i, r);
        if (v.gap != 0) continue;
        for (std::size_t k = 0; k < ot.size(); ++k) {
          if (f.value[ts.merge(i, r, k)] != f.value[ts.merge(i, t_i, k)]) {
            rep.holds = false;
            rep.failure = SirbicFailure::EqualityWithResponsiveness;
            rep.witness = std::move(v);
            rep.differing_opponent_types = k;
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

ImplementReport check_implements(const Environment& env, const Mechanism& mech,
                                 const SolutionSet& solset, const std::variant<SCF, SCS>& target) {
  ImplementReport rep;
  if (solset.empty()) {
    rep.holds = false;
    rep.failure = ImplementFailure::EmptySolutionSet;
    return rep;
  }
  if (const SCF* f = std::get_if<SCF>(&target)) {
    for (std::size_t p = 0; p < solset.size(); ++p) {
      SCF g = outcome_of(env, mech, solset.profiles[p]);
      for (std::size_t t = 0; t < g.value.size(); ++t) {
        if (g.value[t] != f->value.at(t)) {
          rep.holds = false;
          rep.failure = ImplementFailure::OutcomeMismatch;
          rep.profile = p;
          rep.type_profile = t;
          return rep;
        }
      }
    }
    return rep;
  }
  const SCS& F = std::get<SCS>(target);
  std::vector<bool> reached(F.size(), false);
  for (std::size_t p = 0; p < solset.size(); ++p) {
    SCF g = outcome_of(env, mech, solset.profiles[p]);
    bool found = false;
    for (std::size_t m = 0; m < F.size(); ++m) {
      if (F[m] == g) {
        reached[m] = true;
        found = true;
      }
    }
    if (!found) {
      rep.holds = false;
      rep.failure = ImplementFailure::OutcomeMismatch;
      rep.profile = p;
      for (std::size_t t = 0; t < g.value.size(); ++t) {
        bool any = false;
        for (const auto& fm : F) any = any || fm.value.at(t) == g.value[t];
        if (!any) {
          rep.type_profile = t;
          break;
        }
      }
      return rep;
    }
  }
  for (std::size_t m = 0; m < F.size(); ++m) {
    if (!reached[m]) {
      rep.holds = false;
      rep.failure = ImplementFailure::MemberNotReached;
      rep.member = m;
      return rep;
    }
  }
  return rep;
}

SCS outcome_set(const Environment& env, const Mechanism& mech, const SolutionSet& solset) {
  SCS out;
  for (const auto& sigma : solset.profiles) {
    SCF g = outcome_of(env, mech, sigma);
    bool seen = false;
    for (const auto& h : out) seen = seen || h == g;
    if (!seen) out.push_back(std::move(g));
  }
  return out;
}

std::string describe(SirbicFailure f) {
  switch (f) {
    case SirbicFailure::None: return "none";
    case SirbicFailure::StrictViolation: return "strict-violation";
    case SirbicFailure::EqualityWithResponsiveness: return "equality-with-responsiveness";
  }
  return "unknown";
}

std::string describe(ImplementFailure f) {
  switch (f) {
    case ImplementFailure::None: return "none";
    case ImplementFailure::EmptySolutionSet: return "empty-solution-set";
    case ImplementFailure::OutcomeMismatch: return "outcome-mismatch";
    case ImplementFailure::MemberNotReached: return "member-not-reached";
  }
  return "unknown";
}

}  // namespace mechlab
