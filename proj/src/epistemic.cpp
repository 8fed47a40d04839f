#include "mechlab/epistemic.hpp"

#include <algorithm>

#include "mechlab/core_ops.hpp"
#include "mechlab/random.hpp"

namespace mechlab {

namespace {

Dist product_dist(const std::vector<const MixedAction*>& parts, const MixedRadix& radix) {
  std::vector<std::pair<std::vector<std::size_t>, Rational>> acc{{{}, Rational(1)}};
  for (const MixedAction* m : parts) {
    std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
    for (const auto& [d, p] : acc) {
      for (std::size_t a = 0; a < m->size(); ++a) {
        if ((*m)[a] == 0) continue;
        auto nd = d;
        nd.push_back(a);
        next.emplace_back(std::move(nd), p * (*m)[a]);
      }
    }
    acc = std::move(next);
  }
  std::vector<Dist::Entry> entries;
  for (const auto& [d, p] : acc) entries.emplace_back(radix.encode(d), p);
  return Dist::from_entries(std::move(entries));
}

Rational play_utility(const Environment& env, const Mechanism& mech, std::size_t i, const Dist& play, std::size_t t) {
  Rational r = 0;
  for (const auto& [s, p] : play.entries()) r += p * lottery_utility(env, i, mech.outcome[s], t);
  return r;
}

}  // namespace

MixedRadix EpistemicModel::state_space() const {
  std::vector<std::size_t> r;
  for (const auto& t : tau) r.push_back(t.size());
  return MixedRadix(r);
}

std::vector<Diagnostic> EpistemicModel::validate(const Environment& env, const Mechanism& mech) const {
  std::vector<Diagnostic> out;
  const std::size_t I = env.num_agents();
  if (tau.size() != I || eta.size() != I || phi.size() != I) {
    out.push_back({"shape-mismatch", "epistemic model must list every agent", "epistemic"});
    return out;
  }
  for (std::size_t i = 0; i < I; ++i) {
    const std::string base = "epistemic." + env.agents[i];
    if (tau[i].empty()) out.push_back({"empty-type-set", "agent has no epistemic types", base});
    if (eta[i].size() != tau[i].size() || phi[i].size() != tau[i].size()) {
      out.push_back({"shape-mismatch", "phi, eta and tau must have one entry per epistemic type", base});
    }
  }
  if (!out.empty()) return out;
  MixedRadix H = state_space();
  for (std::size_t i = 0; i < I; ++i) {
    const std::string base = "epistemic." + env.agents[i];
    const std::size_t opp = H.without(i).size();
    for (std::size_t h = 0; h < tau[i].size(); ++h) {
      const std::string path = base + "[" + std::to_string(h) + "]";
      if (tau[i][h] >= env.num_types(i)) out.push_back({"unknown-type", "tau refers to an unknown standard type", path + ".tau"});
      if (eta[i][h].size() != mech.num_actions(i)) {
        out.push_back({"shape-mismatch", "eta must be a distribution over own actions", path + ".eta"});
      } else {
        Rational s = 0;
        bool neg = false;
        for (const auto& x : eta[i][h]) {
          neg = neg || x < 0;
          s += x;
        }
        if (neg || s != 1) out.push_back({"belief-not-normalized", "eta must be a probability vector", path + ".eta"});
      }
      bool in_range = true;
      for (const auto& [k, p] : phi[i][h].entries()) in_range = in_range && k < opp && p > 0;
      if (!in_range) out.push_back({"shape-mismatch", "phi support outside H_{-i}", path + ".phi"});
      if (phi[i][h].total() != 1) out.push_back({"belief-not-normalized", "phi must sum to 1", path + ".phi"});
    }
  }
  return out;
}

ResponseModel response_model_for(const std::string& tag) {
  if (tag == "bne" || tag == "levelk" || tag == "icr" || tag == "delta") return ResponseModel::BestReply;
  return ResponseModel::Unavailable;
}

EpistemicAnalysis::EpistemicAnalysis(const Environment& env, const Mechanism& mech, const EpistemicModel& model,
                                     const SolutionSet& solset, Exec exec)
    : env_(&env), mech_(&mech), model_(&model) {
  auto diags = model.validate(env, mech);
  if (!diags.empty()) throw InputError(std::move(diags));
  states_ = model.state_space();
  require_within_budget(mpz_class(static_cast<unsigned long>(states_.size())) * env.num_agents(), "epistemic states");
  types_ = env.type_space();
  actions_ = mech.action_space();
  const std::size_t I = env.num_agents();

  solution_plays_.assign(types_.size(), {});
  for (const auto& sp : solset.profiles) {
    for (std::size_t t = 0; t < types_.size(); ++t) {
      auto& bucket = solution_plays_[t];
      if (std::find(bucket.begin(), bucket.end(), sp.play[t]) == bucket.end()) bucket.push_back(sp.play[t]);
    }
  }

  joint_.resize(I);
  for (std::size_t i = 0; i < I; ++i) {
    MixedRadix opp_states = states_.without(i);
    MixedRadix opp_types = types_.without(i);
    MixedRadix opp_actions = actions_.without(i);
    joint_[i].resize(model.num_epistemic_types(i));
    for (std::size_t h = 0; h < model.num_epistemic_types(i); ++h) {
      std::vector<std::vector<Dist::Entry>> acc(opp_types.size());
      for (const auto& [k, w] : model.phi[i][h].entries()) {
        auto digits = opp_states.decode(k);
        std::vector<const MixedAction*> parts;
        std::size_t pos = 0;
        for (std::size_t j = 0; j < I; ++j) {
          if (j == i) continue;
          parts.push_back(&model.eta[j][digits[pos++]]);
        }
        Dist d = product_dist(parts, opp_actions);
        std::size_t tk = standard_opponent_types(i, k);
        for (const auto& [s, p] : d.entries()) acc[tk].emplace_back(s, w * p);
      }
      for (auto& a : acc) joint_[i][h].push_back(Dist::from_entries(std::move(a)));
    }
  }

  // Per (i, h_i) and per (i, h_i, t_{-i}) ingredients; events follow by broadcast.
  std::vector<std::vector<bool>> w_ok(I), rat_ok(I);
  std::vector<std::vector<std::vector<char>>> tt(I), pm(I);
  for (std::size_t i = 0; i < I; ++i) {
    const std::size_t nh = model.num_epistemic_types(i);
    const std::size_t nk = types_.without(i).size();
    w_ok[i].assign(nh, true);
    rat_ok[i].assign(nh, true);
    tt[i].assign(nh, std::vector<char>(nk, 0));
    pm[i].assign(nh, std::vector<char>(nk, 0));
    for (std::size_t h = 0; h < nh; ++h) {
      const std::size_t ti = model.tau[i][h];
      for (std::size_t k = 0; k < nk; ++k) {
        if (lambda_marginal(i, h, k) != env.beliefs[i][ti][k]) w_ok[i][h] = false;
      }
      auto value = [&](std::size_t h2) {
        Rational r = 0;
        for (std::size_t k = 0; k < nk; ++k) {
          Dist play = pair_play(i, model.eta[i][h2], joint_[i][h][k]);
          r += play_utility(env, mech, i, play, types_.merge(i, ti, k));
        }
        return r;
      };
      Rational own = value(h);
      for (std::size_t h2 = 0; h2 < nh && rat_ok[i][h]; ++h2) {
        if (h2 != h && value(h2) > own) rat_ok[i][h] = false;
      }
      for (std::size_t k = 0; k < nk; ++k) {
        auto cond = lambda_conditional(i, h, k);
        if (!cond) continue;
        tt[i][h][k] = in_solution(types_.merge(i, ti, k), pair_play(i, model.eta[i][h], *cond));
        bool all = true;
        for (std::size_t t2 = 0; t2 < env.num_types(i) && all; ++t2) {
          if (t2 == ti) continue;
          bool some = false;
          for (std::size_t h2 = 0; h2 < nh && !some; ++h2) {
            if (model.tau[i][h2] != t2) continue;
            some = in_solution(types_.merge(i, t2, k), pair_play(i, model.eta[i][h2], *cond));
          }
          all = some;
        }
        pm[i][h][k] = all;
      }
    }
  }

  W_.assign(I, Event(states_.size()));
  RAT_ = TT_ = PM_ = SOL_ = W_;
  const long long n = static_cast<long long>(states_.size());
  auto fill = [&](std::size_t h) {
    for (std::size_t i = 0; i < I; ++i) {
      std::size_t hi = own(h, i);
      std::size_t k = standard_opponent_types(i, opponents(h, i));
      W_[i][h] = w_ok[i][hi];
      RAT_[i][h] = rat_ok[i][hi];
      TT_[i][h] = tt[i][hi][k] != 0;
      PM_[i][h] = pm[i][hi][k] != 0;
      SOL_[i][h] = TT_[i][h] && PM_[i][h];
    }
  };
  // std::vector<bool> packs bits, so parallel writes go through per-state rows.
  if (exec == Exec::Serial || I == 0) {
    for (std::size_t h = 0; h < states_.size(); ++h) fill(h);
  } else {
    std::vector<std::vector<char>> rows(states_.size(), std::vector<char>(5 * I));
#pragma omp parallel for schedule(static)
    for (long long h = 0; h < n; ++h) {
      auto& row = rows[static_cast<std::size_t>(h)];
      for (std::size_t i = 0; i < I; ++i) {
        std::size_t hi = own(static_cast<std::size_t>(h), i);
        std::size_t k = standard_opponent_types(i, opponents(static_cast<std::size_t>(h), i));
        row[5 * i] = w_ok[i][hi];
        row[5 * i + 1] = rat_ok[i][hi];
        row[5 * i + 2] = tt[i][hi][k];
        row[5 * i + 3] = pm[i][hi][k];
        row[5 * i + 4] = tt[i][hi][k] && pm[i][hi][k];
      }
    }
    for (std::size_t h = 0; h < states_.size(); ++h) {
      for (std::size_t i = 0; i < I; ++i) {
        W_[i][h] = rows[h][5 * i];
        RAT_[i][h] = rows[h][5 * i + 1];
        TT_[i][h] = rows[h][5 * i + 2];
        PM_[i][h] = rows[h][5 * i + 3];
        SOL_[i][h] = rows[h][5 * i + 4];
      }
    }
  }
}

std::size_t EpistemicAnalysis::standard_opponent_types(std::size_t i, std::size_t h_minus_i) const {
  auto digits = states_.without(i).decode(h_minus_i);
  std::vector<std::size_t> t;
  std::size_t pos = 0;
  for (std::size_t j = 0; j < model_->num_agents(); ++j) {
    if (j == i) continue;
    t.push_back(model_->tau[j][digits[pos++]]);
  }
  return types_.without(i).encode(t);
}

Rational EpistemicAnalysis::lambda_marginal(std::size_t i, std::size_t h_i, std::size_t k) const {
  return joint_[i][h_i][k].total();
}

std::optional<Dist> EpistemicAnalysis::lambda_conditional(std::size_t i, std::size_t h_i, std::size_t k) const {
  Rational m = lambda_marginal(i, h_i, k);
  if (m == 0) return std::nullopt;
  std::vector<Dist::Entry> e;
  for (const auto& [s, p] : joint_[i][h_i][k].entries()) e.emplace_back(s, p / m);
  return Dist::from_entries(std::move(e));
}

bool EpistemicAnalysis::in_solution(std::size_t t, const Dist& play) const {
  const auto& bucket = solution_plays_[t];
  return std::find(bucket.begin(), bucket.end(), play) != bucket.end();
}

Dist EpistemicAnalysis::pair_play(std::size_t i, const MixedAction& own_action, const Dist& opp) const {
  std::vector<Dist::Entry> e;
  for (std::size_t a = 0; a < own_action.size(); ++a) {
    if (own_action[a] == 0) continue;
    for (const auto& [s, p] : opp.entries()) e.emplace_back(actions_.merge(i, a, s), own_action[a] * p);
  }
  return Dist::from_entries(std::move(e));
}

Event EpistemicAnalysis::RAT_star(std::size_t i, ResponseModel rm) const {
  if (rm == ResponseModel::Unavailable) throw NotCheckable("response sets unavailable for this solution concept");
  const std::size_t nh = model_->num_epistemic_types(i);
  const std::size_t nk = types_.without(i).size();
  std::vector<bool> ok(nh, false);
  for (std::size_t h = 0; h < nh; ++h) {
    Expectation e{i, model_->tau[i][h], {}};
    bool complete = true;
    for (std::size_t k = 0; k < nk && complete; ++k) {
      auto c = lambda_conditional(i, h, k);
      if (!c) complete = false;
      else e.conjecture.push_back(*c);
    }
    if (!complete) continue;
    auto br = best_replies(*env_, *mech_, i, e.type, e);
    bool inside = true;
    for (std::size_t a = 0; a < model_->eta[i][h].size(); ++a) {
      if (model_->eta[i][h][a] > 0 && std::find(br.begin(), br.end(), a) == br.end()) inside = false;
    }
    ok[h] = inside;
  }
  Event out(states_.size());
  for (std::size_t s = 0; s < states_.size(); ++s) out[s] = ok[own(s, i)];
  return out;
}

Event EpistemicAnalysis::K(std::size_t i, const Event& E) const {
  const std::size_t nh = model_->num_epistemic_types(i);
  std::vector<bool> know(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    Rational mass = 0;
    for (const auto& [k, p] : model_->phi[i][h].entries()) {
      if (E[states_.merge(i, h, k)]) mass += p;
    }
    know[h] = mass == 1;
  }
  Event out(states_.size());
  for (std::size_t s = 0; s < states_.size(); ++s) out[s] = know[own(s, i)];
  return out;
}

Event event_and(const Event& a, const Event& b) {
  Event out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && b[k];
  return out;
}

bool event_subset(const Event& a, const Event& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
  }
  return true;
}

bool WitnessFamily::complete() const {
  for (const auto& row : sigma) {
    for (const auto& s : row) {
      if (!s) return false;
    }
  }
  return true;
}

WitnessFamily find_witness_family(const Environment& env, const Mechanism& mech, const SolutionSet& solset) {
  WitnessFamily fam;
  fam.sigma.resize(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) fam.sigma[i].resize(env.num_types(i));
  std::vector<std::vector<std::vector<bool>>> ok;  // [p][i][t]
  for (const auto& sp : solset.profiles) {
    SCF f = outcome_of(env, mech, sp);
    std::vector<std::vector<bool>> cell(env.num_agents());
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      for (std::size_t t = 0; t < env.num_types(i); ++t) cell[i].push_back(sp.product_form && bic_at_cell(env, f, i, t));
    }
    ok.push_back(std::move(cell));
  }
  for (std::size_t p = 0; p < ok.size(); ++p) {
    bool all = true;
    for (const auto& row : ok[p]) all = all && std::all_of(row.begin(), row.end(), [](bool b) { return b; });
    if (all) {
      fam.common = true;
      for (auto& row : fam.sigma) {
        for (auto& s : row) s = solset.profiles[p];
      }
      return fam;
    }
  }
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      for (std::size_t p = 0; p < ok.size() && !fam.sigma[i][t]; ++p) {
        if (ok[p][i][t]) fam.sigma[i][t] = solset.profiles[p];
      }
    }
  }
  return fam;
}

EpistemicModel build_model_from_witnesses(const Environment& env, const Mechanism& mech, const WitnessFamily& family) {
  if (!family.complete()) throw InputError("witness-family-incomplete", "every (agent, type) needs a witness");
  const std::size_t I = env.num_agents();
  using Pair = std::pair<MixedAction, std::size_t>;
  std::vector<std::vector<Pair>> H(I);
  auto index_of = [&](std::size_t j, const Pair& p) -> std::size_t {
    auto it = std::find(H[j].begin(), H[j].end(), p);
    return static_cast<std::size_t>(it - H[j].begin());
  };
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t ti = 0; ti < env.num_types(i); ++ti) {
      const StrategyProfile& s = *family.sigma[i][ti];
      for (std::size_t j = 0; j < I; ++j) {
        for (std::size_t tj = 0; tj < env.num_types(j); ++tj) {
          Pair p{s.marginals[j][tj], tj};
          if (index_of(j, p) == H[j].size()) H[j].push_back(p);
        }
      }
    }
  }
  EpistemicModel m;
  m.phi.resize(I);
  m.eta.resize(I);
  m.tau.resize(I);
  for (std::size_t j = 0; j < I; ++j) {
    for (const auto& [a, t] : H[j]) {
      m.eta[j].push_back(a);
      m.tau[j].push_back(t);
    }
  }
  MixedRadix states = m.state_space();
  MixedRadix types = env.type_space();
  for (std::size_t j = 0; j < I; ++j) {
    MixedRadix opp_states = states.without(j);
    MixedRadix opp_types = types.without(j);
    for (const auto& [a, tj] : H[j]) {
      const StrategyProfile& s = *family.sigma[j][tj];
      std::vector<Dist::Entry> entries;
      for (std::size_t k = 0; k < opp_types.size(); ++k) {
        auto tk = opp_types.decode(k);
        std::vector<std::size_t> hd;
        std::size_t pos = 0;
        for (std::size_t l = 0; l < I; ++l) {
          if (l == j) continue;
          hd.push_back(index_of(l, Pair{s.marginals[l][tk[pos]], tk[pos]}));
          ++pos;
        }
        entries.emplace_back(opp_states.encode(hd), env.beliefs[j][tj][k]);
      }
      m.phi[j].push_back(Dist::from_entries(std::move(entries)));
    }
  }
  (void)mech;
  return m;
}

namespace {

bool target_at(const EpistemicAnalysis& a, std::size_t i, std::size_t h_i, const Event& target) {
  return target[a.states().merge(i, h_i, 0)];
}

Event statement_one_target(const EpistemicAnalysis& a, std::size_t i) {
  return event_and(a.RAT(i), a.K(i, event_and(a.W(i), a.SOL(i))));
}

bool sol_covers_beliefs(const EpistemicAnalysis& a, const Environment& env, std::size_t i, std::size_t h_star) {
  const std::size_t ti = a.model().tau[i][h_star];
  MixedRadix opp_states = a.states().without(i);
  const std::size_t nk = env.type_space().without(i).size();
  for (std::size_t k = 0; k < nk; ++k) {
    if (env.beliefs[i][ti][k] == 0) continue;
    bool found = false;
    for (std::size_t ho = 0; ho < opp_states.size() && !found; ++ho) {
      found = a.standard_opponent_types(i, ho) == k && a.SOL(i)[a.states().merge(i, h_star, ho)];
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

EpistemicReport validate_epistemic_theorems(const Environment& env, const Mechanism& mech, const SolutionSet& solset,
                                            Direction direction, const std::optional<EpistemicModel>& given) {
  EpistemicReport rep;
  rep.direction = direction;
  WitnessFamily fam = find_witness_family(env, mech, solset);

  if (direction == Direction::WitnessesToModel || !given) {
    if (!fam.complete()) {
      for (std::size_t i = 0; i < env.num_agents(); ++i) {
        for (std::size_t t = 0; t < env.num_types(i); ++t) {
          EpistemicCell c;
          c.agent = i;
          c.type = t;
          c.hypothesis = fam.sigma[i][t].has_value();
          if (!c.hypothesis) c.note = "no witness solution for " + env.agents[i] + "/" + env.types[i][t];
          rep.cells.push_back(c);
        }
      }
      rep.note = "hypothesis-not-met";
      return rep;
    }
    rep.model = build_model_from_witnesses(env, mech, fam);
  } else {
    rep.model = *given;
  }
  const EpistemicModel& model = *rep.model;
  EpistemicAnalysis a(env, mech, model, solset);
  MixedRadix types = env.type_space();

  rep.hypothesis_met = true;
  rep.holds = true;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    Event target = statement_one_target(a, i);
    const std::size_t nk = types.without(i).size();
    for (std::size_t ti = 0; ti < env.num_types(i); ++ti) {
      EpistemicCell c;
      c.agent = i;
      c.type = ti;
      std::optional<std::size_t> constructed;
      if (direction == Direction::WitnessesToModel) {
        c.hypothesis = true;
        const StrategyProfile& s = *fam.sigma[i][ti];
        for (std::size_t h = 0; h < model.num_epistemic_types(i); ++h) {
          if (model.tau[i][h] == ti && model.eta[i][h] == s.marginals[i][ti]) constructed = h;
        }
      }
      std::vector<std::size_t> candidates;
      if (constructed) candidates.push_back(*constructed);
      for (std::size_t h = 0; h < model.num_epistemic_types(i); ++h) {
        if (model.tau[i][h] == ti && (!constructed || h != *constructed)) candidates.push_back(h);
      }
      for (std::size_t h : candidates) {
        if (target_at(a, i, h, target)) {
          c.h_star = h;
          break;
        }
      }

      if (direction == Direction::WitnessesToModel) {
        c.holds = c.h_star.has_value();
        if (c.h_star && constructed && *c.h_star != *constructed) c.note = "constructed epistemic type fails; another type succeeds";
        if (!c.h_star) c.note = "no epistemic type in RAT ∩ K(W ∩ SOL)";
        if (c.h_star) c.sol_covers = sol_covers_beliefs(a, env, i, *c.h_star);
      } else {
        c.hypothesis = c.h_star.has_value();
        if (!c.hypothesis) {
          c.note = "statement 1 fails at this cell";
          rep.hypothesis_met = false;
          rep.cells.push_back(c);
          continue;
        }
        const std::size_t hs = *c.h_star;
        c.sol_covers = sol_covers_beliefs(a, env, i, hs);
        // Selector z_i, preferring an epistemic type constant in t_{-i}.
        std::vector<std::vector<std::optional<std::size_t>>> z(env.num_types(i), std::vector<std::optional<std::size_t>>(nk));
        bool membership = true;
        for (std::size_t t2 = 0; t2 < env.num_types(i); ++t2) {
          if (t2 == ti) {
            for (std::size_t k = 0; k < nk; ++k) z[t2][k] = hs;
            continue;
          }
          auto works = [&](std::size_t h2, std::size_t k) {
            auto cond = a.lambda_conditional(i, hs, k);
            return cond && a.in_solution(types.merge(i, t2, k), a.pair_play(i, model.eta[i][h2], *cond));
          };
          std::optional<std::size_t> constant;
          for (std::size_t h2 = 0; h2 < model.num_epistemic_types(i) && !constant; ++h2) {
            if (model.tau[i][h2] != t2) continue;
            bool all = true;
            for (std::size_t k = 0; k < nk && all; ++k) all = env.beliefs[i][ti][k] == 0 || works(h2, k);
            if (all) constant = h2;
          }
          for (std::size_t k = 0; k < nk; ++k) {
            if (constant) {
              z[t2][k] = constant;
              continue;
            }
            c.selector_constant = false;
            for (std::size_t h2 = 0; h2 < model.num_epistemic_types(i) && !z[t2][k]; ++h2) {
              if (model.tau[i][h2] == t2 && works(h2, k)) z[t2][k] = h2;
            }
            if (!z[t2][k] && env.beliefs[i][ti][k] > 0) membership = false;
          }
        }
        // sigma(t) = eta_i(z_i(t)) x lambda_i(h*, t_{-i}); mimicry inequalities.
        bool ic = membership;
        if (membership) {
          std::vector<Rational> value(env.num_types(i), Rational(0));
          for (std::size_t t2 = 0; t2 < env.num_types(i); ++t2) {
            for (std::size_t k = 0; k < nk; ++k) {
              if (env.beliefs[i][ti][k] == 0 || !z[t2][k]) continue;
              auto cond = a.lambda_conditional(i, hs, k);
              Dist play = a.pair_play(i, model.eta[i][*z[t2][k]], *cond);
              value[t2] += env.beliefs[i][ti][k] * play_utility(env, mech, i, play, types.merge(i, ti, k));
            }
          }
          for (std::size_t t2 = 0; t2 < env.num_types(i); ++t2) ic = ic && value[ti] >= value[t2];
        }
        c.holds = membership && ic && c.sol_covers;
        if (!membership) c.note = "selector found no solution-consistent epistemic type";
        else if (!ic) c.note = c.selector_constant ? "mimicry inequality fails" : "mimicry inequality fails with t_{-i}-dependent selector";
      }
      rep.holds = rep.holds && (!c.hypothesis || c.holds);
      rep.cells.push_back(c);
    }
  }
  if (direction == Direction::WitnessesToModel && !fam.common) {
    rep.note = "witness family uses different profiles across cells";
  }
  return rep;
}

EpistemicModel random_epistemic_model(const Environment& env, const Mechanism& mech, std::mt19937_64& rng,
                                      std::size_t max_h) {
  const std::size_t I = env.num_agents();
  EpistemicModel m;
  m.phi.resize(I);
  m.eta.resize(I);
  m.tau.resize(I);
  for (std::size_t i = 0; i < I; ++i) {
    const std::size_t n = std::max(env.num_types(i), static_cast<std::size_t>(1 + uniform_below(rng, max_h)));
    for (std::size_t h = 0; h < n; ++h) {
      m.tau[i].push_back(h < env.num_types(i) ? h : uniform_below(rng, env.num_types(i)));
      const std::size_t na = mech.num_actions(i);
      MixedAction a(na, Rational(0));
      std::size_t a1 = uniform_below(rng, na);
      if (na > 1 && uniform_below(rng, 3) == 0) {
        std::size_t a2 = (a1 + 1 + uniform_below(rng, na - 1)) % na;
        a[a1] = Rational(1, 2);
        a[a2] = Rational(1, 2);
      } else {
        a[a1] = 1;
      }
      m.eta[i].push_back(a);
    }
  }
  MixedRadix states = m.state_space();
  MixedRadix types = env.type_space();
  for (std::size_t i = 0; i < I; ++i) {
    MixedRadix opp_states = states.without(i);
    MixedRadix opp_types = types.without(i);
    for (std::size_t h = 0; h < m.tau[i].size(); ++h) {
      std::vector<Dist::Entry> entries;
      if (uniform_below(rng, 2) == 0) {
        // Consistent with the prior: one opponent state per t_{-i}.
        for (std::size_t k = 0; k < opp_types.size(); ++k) {
          std::vector<std::size_t> matches;
          for (std::size_t ho = 0; ho < opp_states.size(); ++ho) {
            auto d = opp_states.decode(ho);
            std::vector<std::size_t> t;
            std::size_t pos = 0;
            for (std::size_t j = 0; j < I; ++j) {
              if (j != i) t.push_back(m.tau[j][d[pos++]]);
            }
            if (opp_types.encode(t) == k) matches.push_back(ho);
          }
          entries.emplace_back(matches[uniform_below(rng, matches.size())], env.beliefs[i][m.tau[i][h]][k]);
        }
      } else {
        std::vector<std::uint64_t> w(opp_states.size());
        std::uint64_t total = 0;
        while (total == 0) {
          total = 0;
          for (auto& x : w) {
            x = uniform_below(rng, 4);
            total += x;
          }
        }
        for (std::size_t ho = 0; ho < w.size(); ++ho) {
          if (w[ho]) entries.emplace_back(ho, Rational(static_cast<unsigned long>(w[ho]), static_cast<unsigned long>(total)));
        }
      }
      for (auto& e : entries) e.second.canonicalize();
      m.phi[i].push_back(Dist::from_entries(std::move(entries)));
    }
  }
  return m;
}

}  // namespace mechlab
