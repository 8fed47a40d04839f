#include "mechlab/engines.hpp"

#include <omp.h>

#include <algorithm>
#include <map>

#include "mechlab/lp.hpp"

namespace mechlab {

namespace {

// One digit per (agent, type) cell, agent-major; radix |S_i|.
MixedRadix cell_space(const Environment& env, const Mechanism& mech) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) r.push_back(mech.num_actions(i));
  }
  return MixedRadix(std::move(r));
}

std::vector<PureStrategy> decode_candidate(const Environment& env, const MixedRadix& cells,
                                           std::size_t c) {
  std::vector<PureStrategy> st(env.num_agents());
  std::size_t d = 0;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    st[i].resize(env.num_types(i));
    for (std::size_t t = 0; t < env.num_types(i); ++t) st[i][t] = cells.digit(c, d++);
  }
  return st;
}

// Opponent action profile at each opponent type profile when everyone plays st.
std::vector<std::size_t> opponent_play(const PayoffTable& pt, const std::vector<PureStrategy>& st,
                                       std::size_t i) {
  const MixedRadix& ot = pt.opp_types(i);
  const MixedRadix& oa = pt.opp_actions(i);
  std::vector<std::size_t> out(ot.size());
  std::vector<std::size_t> digits(ot.dims());
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < st.size(); ++j) {
      if (j == i) continue;
      digits[d] = st[j][ot.digit(k, d)];
      ++d;
    }
    out[k] = oa.encode(digits);
  }
  return out;
}

Expectation pure_conjecture(const PayoffTable& pt, const std::vector<PureStrategy>& st,
                            std::size_t i, std::size_t t_i) {
  Expectation e{i, t_i, {}};
  for (std::size_t s : opponent_play(pt, st, i)) e.conjecture.push_back(Dist::point(s));
  return e;
}

template <class Pred>
std::vector<std::size_t> filter_candidates(std::size_t total, Exec exec, const Pred& pred) {
  std::vector<std::size_t> hits;
  if (exec == Exec::Serial) {
    for (std::size_t c = 0; c < total; ++c) {
      if (pred(c)) hits.push_back(c);
    }
    return hits;
  }
  const long long n = static_cast<long long>(total);
#pragma omp parallel
  {
    std::vector<std::size_t> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (long long c = 0; c < n; ++c) {
      if (pred(static_cast<std::size_t>(c))) local.push_back(static_cast<std::size_t>(c));
    }
#pragma omp critical
    hits.insert(hits.end(), local.begin(), local.end());
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

MixedRadix checked_cell_space(const Environment& env, const Mechanism& mech, const char* what) {
  require_within_budget(count_pure_profiles(env, mech), what);
  return cell_space(env, mech);
}

bool is_bne(const PayoffTable& pt, const std::vector<PureStrategy>& st) {
  for (std::size_t i = 0; i < st.size(); ++i) {
    std::vector<std::size_t> opp = opponent_play(pt, st, i);
    for (std::size_t t_i = 0; t_i < st[i].size(); ++t_i) {
      Rational own = pt.interim_pure(i, t_i, st[i][t_i], opp);
      for (std::size_t a = 0; a < pt.mech().num_actions(i); ++a) {
        if (a != st[i][t_i] && pt.interim_pure(i, t_i, a, opp) > own) return false;
      }
    }
  }
  return true;
}

Rational cursed_payoff(const PayoffTable& pt, std::size_t i, std::size_t t_i, std::size_t a,
                       const std::vector<std::size_t>& opp, const Rational& chi) {
  const MixedRadix& ot = pt.opp_types(i);
  Rational truthful = 0, averaged = 0;
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::size_t t = pt.types().merge(i, t_i, k);
    const Rational& pk = pt.belief(i, t_i, k);
    truthful += pk * pt.u(i, pt.actions().merge(i, a, opp[k]), t);
    Rational inner = 0;
    for (std::size_t k2 = 0; k2 < ot.size(); ++k2) {
      inner += pt.belief(i, t_i, k2) * pt.u(i, pt.actions().merge(i, a, opp[k2]), t);
    }
    averaged += pk * inner;
  }
  return (1 - chi) * truthful + chi * averaged;
}

bool is_cursed(const PayoffTable& pt, const std::vector<PureStrategy>& st, const Rational& chi) {
  for (std::size_t i = 0; i < st.size(); ++i) {
    std::vector<std::size_t> opp = opponent_play(pt, st, i);
    for (std::size_t t_i = 0; t_i < st[i].size(); ++t_i) {
      Rational own = cursed_payoff(pt, i, t_i, st[i][t_i], opp, chi);
      for (std::size_t a = 0; a < pt.mech().num_actions(i); ++a) {
        if (a != st[i][t_i] && cursed_payoff(pt, i, t_i, a, opp, chi) > own) return false;
      }
    }
  }
  return true;
}

ExpectationProfile profile_conjectures(const Environment& env, const Mechanism& mech,
                                       const StrategyProfile& sigma) {
  ExpectationProfile e(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      e[i].push_back(conjecture_from_profile(env, mech, sigma, i, t));
    }
  }
  return e;
}

// Cartesian product of per-slot option lists.
template <class T>
std::vector<std::vector<T>> cartesian(const std::vector<std::vector<T>>& options) {
  std::vector<std::vector<T>> out{{}};
  for (const auto& opts : options) {
    std::vector<std::vector<T>> next;
    next.reserve(out.size() * opts.size());
    for (const auto& prefix : out) {
      for (const auto& o : opts) {
        auto v = prefix;
        v.push_back(o);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

template <class T>
mpz_class cartesian_size(const std::vector<std::vector<T>>& options) {
  mpz_class n = 1;
  for (const auto& o : options) n *= static_cast<unsigned long>(o.size());
  return n;
}

// Distribution over S_{-i} of independent opponents with the given marginals.
Dist product_over_opponents(const PayoffTable& pt, std::size_t i, std::size_t k,
                            const std::vector<std::vector<MixedAction>>& marginals) {
  const MixedRadix& ot = pt.opp_types(i);
  const MixedRadix& oa = pt.opp_actions(i);
  std::vector<Dist::Entry> cur{{0, Rational(1)}};
  std::size_t d = 0;
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    if (j == i) continue;
    const MixedAction& m = marginals[j][ot.digit(k, d)];
    std::vector<Dist::Entry> next;
    for (const auto& [idx, p] : cur) {
      for (std::size_t a = 0; a < m.size(); ++a) {
        if (m[a] != 0) next.emplace_back(idx * oa.radices()[d] + a, p * m[a]);
      }
    }
    cur = std::move(next);
    ++d;
  }
  return Dist::from_entries(std::move(cur));
}

}  // namespace

std::vector<std::vector<MixedAction>> AnchorSpec::resolve(const Environment& env,
                                                         const Mechanism& mech) const {
  std::vector<std::vector<MixedAction>> out(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    std::size_t na = mech.num_actions(i);
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      switch (kind) {
        case AnchorKind::Uniform:
          out[i].push_back(MixedAction(na, Rational(1, static_cast<unsigned long>(na))));
          break;
        case AnchorKind::TruthfulLabel: {
          auto it = std::find(mech.actions[i].begin(), mech.actions[i].end(), env.types[i][t]);
          if (it == mech.actions[i].end()) {
            throw InputError("anchor-no-truthful-action",
                             "no action labelled '" + env.types[i][t] + "'",
                             "anchor." + env.agents[i]);
          }
          out[i].push_back(pure_action(static_cast<std::size_t>(it - mech.actions[i].begin()), na));
          break;
        }
        case AnchorKind::Custom: {
          if (custom.size() != env.num_agents() || custom[i].size() != env.num_types(i)) {
            throw InputError("anchor-shape", "custom anchor needs one action per type",
                             "anchor." + env.agents[i]);
          }
          const MixedAction& m = custom[i][t];
          bool ok = m.size() == na && sum(m) == 1;
          for (const auto& p : m) ok = ok && p >= 0;
          if (!ok) {
            throw InputError("anchor-not-distribution", "anchor must be a distribution over actions",
                             "anchor." + env.agents[i] + "." + env.types[i][t]);
          }
          out[i].push_back(m);
          break;
        }
      }
    }
  }
  return out;
}

DeltaRestriction DeltaRestriction::unrestricted(const Environment& env, const Mechanism& mech) {
  std::vector<std::vector<std::size_t>> all(env.num_agents());
  for (std::size_t j = 0; j < env.num_agents(); ++j) {
    for (std::size_t a = 0; a < mech.num_actions(j); ++a) all[j].push_back(a);
  }
  return from_action_sets(env, mech, all);
}

DeltaRestriction DeltaRestriction::from_action_sets(
    const Environment& env, const Mechanism& mech,
    const std::vector<std::vector<std::size_t>>& actions_of) {
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  DeltaRestriction r;
  r.allowed.resize(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    MixedRadix oa = as.without(i);
    std::vector<std::size_t> ok;
    for (std::size_t s = 0; s < oa.size(); ++s) {
      bool keep = true;
      std::size_t d = 0;
      for (std::size_t j = 0; j < env.num_agents(); ++j) {
        if (j == i) continue;
        const auto& set = actions_of.at(j);
        keep = keep && std::find(set.begin(), set.end(), oa.digit(s, d)) != set.end();
        ++d;
      }
      if (keep) ok.push_back(s);
    }
    std::size_t nk = ts.without(i).size();
    r.allowed[i].assign(env.num_types(i), std::vector<std::vector<std::size_t>>(nk, ok));
  }
  return r;
}

std::vector<Diagnostic> DeltaRestriction::validate(const Environment& env,
                                                   const Mechanism& mech) const {
  std::vector<Diagnostic> out;
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  if (allowed.size() != env.num_agents()) {
    out.push_back({"delta-shape", "one restriction per agent is required", "delta"});
    return out;
  }
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    std::size_t nk = ts.without(i).size();
    std::size_t ns = as.without(i).size();
    if (allowed[i].size() != env.num_types(i)) {
      out.push_back({"delta-shape", "one restriction per type is required", "delta." + env.agents[i]});
      continue;
    }
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      std::string path = "delta." + env.agents[i] + "." + env.types[i][t];
      if (allowed[i][t].size() != nk) {
        out.push_back({"delta-shape", "one support per opponent type profile is required", path});
        continue;
      }
      for (std::size_t k = 0; k < nk; ++k) {
        const auto& set = allowed[i][t][k];
        if (set.empty()) out.push_back({"delta-empty", "allowed support is empty", path});
        for (std::size_t s : set) {
          if (s >= ns) out.push_back({"delta-unknown-action", "support index out of range", path});
        }
      }
    }
  }
  return out;
}

mpz_class count_pure_profiles(const Environment& env, const Mechanism& mech) {
  mpz_class n = 1;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) n *= static_cast<unsigned long>(mech.num_actions(i));
  }
  return n;
}

SolutionSet solve_pure_bne(const Environment& env, const Mechanism& mech, Exec exec) {
  MixedRadix cells = checked_cell_space(env, mech, "pure BNE enumeration");
  PayoffTable pt(env, mech);
  auto hits = filter_candidates(cells.size(), exec, [&](std::size_t c) {
    return is_bne(pt, decode_candidate(env, cells, c));
  });
  SolutionSet out;
  out.concept_tag = "bne";
  for (std::size_t c : hits) {
    StrategyProfile sp = make_pure_profile(env, mech, decode_candidate(env, cells, c));
    out.provenance.push_back(profile_conjectures(env, mech, sp));
    out.profiles.push_back(std::move(sp));
  }
  return out;
}

Expectation cursed_expectation(const PayoffTable& pt, const StrategyProfile& sigma, std::size_t i,
                               std::size_t t_i, const Rational& chi) {
  Expectation e = conjecture_from_profile(pt.env(), pt.mech(), sigma, i, t_i);
  std::vector<Dist::Entry> avg;
  for (std::size_t k = 0; k < e.conjecture.size(); ++k) {
    for (const auto& [s, q] : e.conjecture[k].entries()) avg.emplace_back(s, pt.belief(i, t_i, k) * q);
  }
  Dist averaged = Dist::from_entries(std::move(avg));
  for (auto& d : e.conjecture) d = mix(1 - chi, d, averaged);
  return e;
}

SolutionSet solve_cursed(const Environment& env, const Mechanism& mech, const CursedConfig& cfg,
                         Exec exec) {
  if (cfg.chi < 0 || cfg.chi > 1) throw InputError("chi-out-of-range", "chi must lie in [0,1]", "cursed.chi");
  MixedRadix cells = checked_cell_space(env, mech, "cursed equilibrium enumeration");
  PayoffTable pt(env, mech);
  auto hits = filter_candidates(cells.size(), exec, [&](std::size_t c) {
    return is_cursed(pt, decode_candidate(env, cells, c), cfg.chi);
  });
  SolutionSet out;
  out.concept_tag = "cursed";
  for (std::size_t c : hits) {
    StrategyProfile sp = make_pure_profile(env, mech, decode_candidate(env, cells, c));
    ExpectationProfile e(env.num_agents());
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        e[i].push_back(cursed_expectation(pt, sp, i, t, cfg.chi));
      }
    }
    out.provenance.push_back(std::move(e));
    out.profiles.push_back(std::move(sp));
  }
  return out;
}

LevelKResult solve_level_k(const Environment& env, const Mechanism& mech, const LevelKConfig& cfg) {
  if (cfg.k_max < 1) throw InputError("k-max-invalid", "k_max must be at least 1", "level_k.k_max");
  const std::size_t n = env.num_agents();
  PayoffTable pt(env, mech);
  auto anchors = cfg.anchor.resolve(env, mech);

  // Witness per (level, agent, strategy): opponents' lower-level strategies
  // (slot i unused), empty for level 1.
  using Witness = std::vector<PureStrategy>;
  std::vector<std::vector<std::map<PureStrategy, Witness>>> found(cfg.k_max,
                                                                  std::vector<std::map<PureStrategy, Witness>>(n));

  auto strategies_against = [&](std::size_t i, auto&& expectation_for_type) {
    std::vector<std::vector<std::size_t>> per_type;
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      per_type.push_back(best_replies(pt, i, t, expectation_for_type(t)));
    }
    require_within_budget(cartesian_size(per_type), "level-k best-reply strategies");
    return cartesian(per_type);
  };

  for (std::size_t i = 0; i < n; ++i) {
    auto strategies = strategies_against(i, [&](std::size_t t) {
      Expectation e{i, t, {}};
      for (std::size_t k = 0; k < pt.opp_types(i).size(); ++k) {
        e.conjecture.push_back(product_over_opponents(pt, i, k, anchors));
      }
      return e;
    });
    for (auto& s : strategies) found[0][i].emplace(std::move(s), Witness{});
  }

  for (std::size_t level = 1; level < cfg.k_max; ++level) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<PureStrategy>> options;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<PureStrategy> lst;
        if (j == i) {
          lst.push_back(PureStrategy(env.num_types(i), 0));
        } else {
          for (const auto& [s, w] : found[level - 1][j]) lst.push_back(s);
        }
        options.push_back(std::move(lst));
      }
      require_within_budget(cartesian_size(options), "level-k opponent profiles");
      for (auto& opp : cartesian(options)) {
        auto strategies = strategies_against(i, [&](std::size_t t) { return pure_conjecture(pt, opp, i, t); });
        for (auto& s : strategies) found[level][i].emplace(std::move(s), opp);
      }
    }
  }

  LevelKResult res;
  res.levels.resize(cfg.k_max);
  for (std::size_t level = 0; level < cfg.k_max; ++level) {
    res.levels[level].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [s, w] : found[level][i]) res.levels[level][i].push_back(s);
    }
  }

  // Union over levels, remembering the highest level and its conjecture.
  std::vector<std::vector<PureStrategy>> unions(n);
  std::vector<std::map<PureStrategy, std::size_t>> top_level(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t level = 0; level < cfg.k_max; ++level) {
      for (const auto& [s, w] : found[level][i]) top_level[i][s] = level;
    }
    for (const auto& [s, l] : top_level[i]) unions[i].push_back(s);
  }
  require_within_budget(cartesian_size(unions), "level-k solution profiles");

  res.solutions.concept_tag = "level-k";
  for (auto& combo : cartesian(unions)) {
    ExpectationProfile e(n);
    std::vector<std::size_t> lv(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t level = top_level[i].at(combo[i]);
      lv[i] = level + 1;
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        if (level == 0) {
          Expectation ex{i, t, {}};
          for (std::size_t k = 0; k < pt.opp_types(i).size(); ++k) {
            ex.conjecture.push_back(product_over_opponents(pt, i, k, anchors));
          }
          e[i].push_back(std::move(ex));
        } else {
          e[i].push_back(pure_conjecture(pt, found[level][i].at(combo[i]), i, t));
        }
      }
    }
    res.solutions.profiles.push_back(make_pure_profile(env, mech, combo));
    res.solutions.provenance.push_back(std::move(e));
    res.recorded_level.push_back(std::move(lv));
  }
  return res;
}

namespace {

struct CellTask {
  std::size_t i, t_i, s_i;
};

// Supports the conjecture of (i, t_i) may use at each opponent type profile.
std::vector<std::vector<std::size_t>> feasible_supports(const PayoffTable& pt, const Survivors& cur,
                                                        const DeltaRestriction& r, std::size_t i,
                                                        std::size_t t_i) {
  const MixedRadix& ot = pt.opp_types(i);
  const MixedRadix& oa = pt.opp_actions(i);
  std::vector<std::vector<std::size_t>> out(ot.size());
  for (std::size_t k = 0; k < ot.size(); ++k) {
    for (std::size_t s : r.allowed[i][t_i][k]) {
      bool ok = true;
      std::size_t d = 0;
      for (std::size_t j = 0; j < cur.size() && ok; ++j) {
        if (j == i) continue;
        const auto& set = cur[j][ot.digit(k, d)];
        ok = std::binary_search(set.begin(), set.end(), oa.digit(s, d));
        ++d;
      }
      if (ok) out[k].push_back(s);
    }
  }
  return out;
}

std::optional<Expectation> supporting_conjecture(const PayoffTable& pt,
                                                 const std::vector<std::vector<std::size_t>>& supports,
                                                 std::size_t i, std::size_t t_i, std::size_t s_i) {
  for (const auto& sup : supports) {
    if (sup.empty()) return std::nullopt;
  }
  lp::Problem prob;
  std::vector<std::vector<std::size_t>> var(supports.size());
  for (std::size_t k = 0; k < supports.size(); ++k) {
    std::vector<lp::Term> row;
    for (std::size_t m = 0; m < supports[k].size(); ++m) {
      std::size_t v = prob.add_variable(lp::VarKind::NonNegative);
      var[k].push_back(v);
      row.push_back({v, Rational(1)});
    }
    prob.add_constraint(std::move(row), lp::Sense::Equal, 1);
  }
  const std::size_t na = pt.mech().num_actions(i);
  for (std::size_t a = 0; a < na; ++a) {
    if (a == s_i) continue;
    std::vector<lp::Term> row;
    for (std::size_t k = 0; k < supports.size(); ++k) {
      std::size_t t = pt.types().merge(i, t_i, k);
      const Rational& pk = pt.belief(i, t_i, k);
      for (std::size_t m = 0; m < supports[k].size(); ++m) {
        std::size_t s = supports[k][m];
        Rational c = pk * (pt.u(i, pt.actions().merge(i, s_i, s), t) - pt.u(i, pt.actions().merge(i, a, s), t));
        if (c != 0) row.push_back({var[k][m], std::move(c)});
      }
    }
    prob.add_constraint(std::move(row), lp::Sense::GreaterEq, 0);
  }
  lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  Expectation e{i, t_i, {}};
  for (std::size_t k = 0; k < supports.size(); ++k) {
    std::vector<Dist::Entry> entries;
    for (std::size_t m = 0; m < supports[k].size(); ++m) entries.emplace_back(supports[k][m], sol.x[var[k][m]]);
    e.conjecture.push_back(Dist::from_entries(std::move(entries)));
  }
  return e;
}

}  // namespace

Survivors apply_elimination(const PayoffTable& pt, const Survivors& current,
                            const DeltaRestriction& restriction, Exec exec,
                            std::vector<std::vector<std::vector<std::optional<Expectation>>>>* conjectures) {
  const Environment& env = pt.env();
  std::vector<CellTask> tasks;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      for (std::size_t s : current[i][t]) tasks.push_back({i, t, s});
    }
  }
  std::vector<std::optional<Expectation>> result(tasks.size());
  auto work = [&](std::size_t idx) {
    const CellTask& c = tasks[idx];
    auto supports = feasible_supports(pt, current, restriction, c.i, c.t_i);
    result[idx] = supporting_conjecture(pt, supports, c.i, c.t_i, c.s_i);
  };
  if (exec == Exec::Serial) {
    for (std::size_t idx = 0; idx < tasks.size(); ++idx) work(idx);
  } else {
    const long long nt = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long idx = 0; idx < nt; ++idx) work(static_cast<std::size_t>(idx));
  }
  Survivors next(env.num_agents());
  if (conjectures) conjectures->assign(env.num_agents(), {});
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    next[i].resize(env.num_types(i));
    if (conjectures) {
      (*conjectures)[i].assign(env.num_types(i),
                               std::vector<std::optional<Expectation>>(pt.mech().num_actions(i)));
    }
  }
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    if (!result[idx]) continue;
    const CellTask& c = tasks[idx];
    next[c.i][c.t_i].push_back(c.s_i);
    if (conjectures) (*conjectures)[c.i][c.t_i][c.s_i] = std::move(result[idx]);
  }
  return next;
}

RationalizableResult solve_rationalizable(const Environment& env, const Mechanism& mech,
                                          const std::optional<DeltaRestriction>& restriction,
                                          Exec exec) {
  DeltaRestriction r = restriction ? *restriction : DeltaRestriction::unrestricted(env, mech);
  if (auto ds = r.validate(env, mech); !ds.empty()) throw InputError(std::move(ds));
  PayoffTable pt(env, mech);
  Survivors cur(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    cur[i].resize(env.num_types(i));
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      for (std::size_t a = 0; a < mech.num_actions(i); ++a) cur[i][t].push_back(a);
    }
  }
  RationalizableResult res;
  std::vector<std::vector<std::vector<std::optional<Expectation>>>> conj;
  for (;;) {
    Survivors next = apply_elimination(pt, cur, r, exec, &conj);
    ++res.rounds;
    bool same = next == cur;
    cur = std::move(next);
    if (same) break;
  }
  res.surviving = cur;
  res.solutions.concept_tag = restriction ? "delta" : "icr";

  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) cells.push_back(cur[i][t]);
  }
  require_within_budget(cartesian_size(cells), "rationalizable solution profiles");
  for (auto& flat : cartesian(cells)) {
    std::vector<PureStrategy> st(env.num_agents());
    std::size_t d = 0;
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      for (std::size_t t = 0; t < env.num_types(i); ++t) st[i].push_back(flat[d++]);
    }
    ExpectationProfile e(env.num_agents());
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      std::vector<std::size_t> opp = opponent_play(pt, st, i);
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        bool allowed = true;
        for (std::size_t k = 0; k < opp.size() && allowed; ++k) {
          const auto& set = r.allowed[i][t][k];
          allowed = std::find(set.begin(), set.end(), opp[k]) != set.end();
        }
        Expectation pure = pure_conjecture(pt, st, i, t);
        if (allowed) {
          auto br = best_replies(pt, i, t, pure);
          if (std::binary_search(br.begin(), br.end(), st[i][t])) {
            e[i].push_back(std::move(pure));
            continue;
          }
        }
        e[i].push_back(*conj[i][t][st[i][t]]);
      }
    }
    res.solutions.profiles.push_back(make_pure_profile(env, mech, std::move(st)));
    res.solutions.provenance.push_back(std::move(e));
  }
  return res;
}

}  // namespace mechlab
