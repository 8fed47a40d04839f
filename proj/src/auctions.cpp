#include <algorithm>
#include <map>

#include "mechlab/applications.hpp"
#include "mechlab/core_ops.hpp"
#include "mechlab/properties.hpp"

namespace mechlab {

namespace {

std::vector<std::vector<std::string>> type_labels(const AuctionEnvironment& env) {
  std::vector<std::vector<std::string>> out;
  for (const auto& ts : env.types) {
    std::vector<std::string> row;
    for (const auto& t : ts) row.push_back(to_string(t));
    out.push_back(row);
  }
  return out;
}

void require_valid(const AuctionEnvironment& env) {
  auto d = env.validate();
  if (!d.empty()) throw InputError(std::move(d));
}

void require_shape(const AuctionEnvironment& env, const AllocationSCF& f) {
  const std::size_t T = env.type_space().size();
  const std::size_t I = env.types.size();
  bool ok = f.q.size() == T && f.x.size() == T;
  for (std::size_t t = 0; ok && t < T; ++t) ok = f.q[t].size() == I && f.x[t].size() == I;
  if (!ok) throw InputError("shape-mismatch", "allocation '" + f.name + "' does not match the type space", f.name);
}

// Interim averages of q and x for truthful type t_i.
Rational interim_q(const AuctionEnvironment& env, const std::vector<std::vector<std::vector<Rational>>>& beliefs,
                   const AllocationSCF& f, std::size_t i, std::size_t t_i) {
  MixedRadix ts = env.type_space();
  MixedRadix opp = ts.without(i);
  Rational r = 0;
  for (std::size_t k = 0; k < opp.size(); ++k) r += beliefs[i][t_i][k] * f.q[ts.merge(i, t_i, k)][i];
  return r;
}

Rational interim_x(const AuctionEnvironment& env, const std::vector<std::vector<std::vector<Rational>>>& beliefs,
                   const AllocationSCF& f, std::size_t i, std::size_t t_i) {
  MixedRadix ts = env.type_space();
  MixedRadix opp = ts.without(i);
  Rational r = 0;
  for (std::size_t k = 0; k < opp.size(); ++k) r += beliefs[i][t_i][k] * f.x[ts.merge(i, t_i, k)][i];
  return r;
}

std::string allocation_label(const std::vector<Rational>& q, const std::vector<Rational>& x) {
  std::string s = "q=(";
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + to_string(q[i]);
  s += ");x=(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + to_string(x[i]);
  return s + ")";
}

}  // namespace

MixedRadix AuctionEnvironment::type_space() const {
  std::vector<std::size_t> r;
  for (const auto& t : types) r.push_back(t.size());
  return MixedRadix(r);
}

Rational AuctionEnvironment::value(std::size_t i, std::size_t t) const {
  if (values.empty()) return types[i][type_space().digit(t, i)];
  return values[i][t];
}

std::vector<std::vector<std::vector<Rational>>> AuctionEnvironment::beliefs() const {
  return Environment::beliefs_from_prior(type_labels(*this), prior);
}

std::vector<Diagnostic> AuctionEnvironment::validate() const {
  std::vector<Diagnostic> out;
  if (types.empty()) out.push_back({"no-agents", "auction needs at least one bidder", "types"});
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i].empty()) out.push_back({"empty-type-set", "bidder has no types", "types[" + std::to_string(i) + "]"});
    for (std::size_t k = 1; k < types[i].size(); ++k) {
      if (!(types[i][k - 1] < types[i][k])) {
        out.push_back({"types-not-increasing", "types must be strictly increasing", "types[" + std::to_string(i) + "]"});
        break;
      }
    }
  }
  if (!out.empty()) return out;
  MixedRadix ts = type_space();
  if (prior.size() != ts.size()) {
    out.push_back({"shape-mismatch", "prior length differs from |T|", "prior"});
    return out;
  }
  Rational total = 0;
  for (std::size_t t = 0; t < prior.size(); ++t) {
    if (prior[t] <= 0) out.push_back({"belief-not-positive", "prior must have full support", "prior[" + std::to_string(t) + "]"});
    total += prior[t];
  }
  if (total != 1) out.push_back({"belief-not-normalized", "prior sums to " + to_string(total), "prior"});
  if (!values.empty()) {
    bool shape = values.size() == types.size();
    for (std::size_t i = 0; shape && i < values.size(); ++i) shape = values[i].size() == ts.size();
    if (!shape) {
      out.push_back({"shape-mismatch", "values must be [agent][type profile]", "values"});
      return out;
    }
    for (std::size_t i = 0; i < types.size(); ++i) {
      for (std::size_t t = 0; t < ts.size(); ++t) {
        std::size_t own = ts.digit(t, i);
        if (own + 1 < types[i].size() && !(values[i][t] < values[i][ts.replace(t, i, own + 1)])) {
          out.push_back({"values-not-increasing", "value must be strictly increasing in own type",
                         "values[" + std::to_string(i) + "][" + std::to_string(t) + "]"});
        }
      }
    }
  }
  return out;
}

AuctionEnvironment uniform_auction(std::vector<std::vector<Rational>> types) {
  AuctionEnvironment env;
  env.types = std::move(types);
  std::size_t T = env.type_space().size();
  env.prior.assign(T, Rational(1, static_cast<unsigned long>(T)));
  return env;
}

AuctionEnvironment uniform_grid_auction(std::size_t bidders, std::size_t n) {
  if (n < 2) throw InputError("grid-too-small", "auction grid needs at least 2 points", "n");
  std::vector<Rational> grid;
  for (std::size_t j = 0; j < n; ++j) {
    Rational v(static_cast<unsigned long>(j), static_cast<unsigned long>(n - 1));
    v.canonicalize();
    grid.push_back(v);
  }
  return uniform_auction(std::vector<std::vector<Rational>>(bidders, grid));
}

AllocationSCF efficient_allocation(const AuctionEnvironment& env, std::string name) {
  require_valid(env);
  MixedRadix ts = env.type_space();
  const std::size_t I = env.types.size();
  AllocationSCF f;
  f.name = std::move(name);
  f.q.assign(ts.size(), std::vector<Rational>(I, Rational(0)));
  f.x.assign(ts.size(), std::vector<Rational>(I, Rational(0)));
  for (std::size_t t = 0; t < ts.size(); ++t) {
    Rational best = env.value(0, t);
    for (std::size_t i = 1; i < I; ++i) best = std::max(best, env.value(i, t));
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < I; ++i) {
      if (env.value(i, t) == best) winners.push_back(i);
    }
    for (std::size_t i : winners) f.q[t][i] = Rational(1, static_cast<unsigned long>(winners.size()));
  }
  return f;
}

AllocationSCF second_price_rule(const AuctionEnvironment& env) {
  AllocationSCF f = efficient_allocation(env, "second-price");
  MixedRadix ts = env.type_space();
  const std::size_t I = env.types.size();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    for (std::size_t i = 0; i < I; ++i) {
      if (f.q[t][i] == 0) continue;
      Rational other = 0;
      for (std::size_t j = 0; j < I; ++j) {
        if (j != i) other = std::max(other, env.value(j, t));
      }
      f.x[t][i] = f.q[t][i] * other;
    }
  }
  return f;
}

AllocationSCF first_price_style_rule(const AuctionEnvironment& env) {
  AllocationSCF f = efficient_allocation(env, "first-price-style");
  MixedRadix ts = env.type_space();
  auto beliefs = env.beliefs();
  for (std::size_t i = 0; i < env.types.size(); ++i) {
    const std::size_t n = env.types[i].size();
    std::vector<Rational> Q(n), X(n), bid(n, Rational(0));
    for (std::size_t k = 0; k < n; ++k) Q[k] = interim_q(env, beliefs, f, i, k);
    X[0] = Q[0] * env.types[i][0];
    for (std::size_t k = 1; k < n; ++k) X[k] = X[k - 1] + env.types[i][k] * (Q[k] - Q[k - 1]);
    for (std::size_t k = 0; k < n; ++k) {
      if (Q[k] > 0) bid[k] = X[k] / Q[k];
    }
    for (std::size_t t = 0; t < ts.size(); ++t) f.x[t][i] = f.q[t][i] * bid[ts.digit(t, i)];
  }
  return f;
}

AllocationSCF fully_extractive_rule(const AuctionEnvironment& env) {
  AllocationSCF f = efficient_allocation(env, "fully-extractive");
  MixedRadix ts = env.type_space();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    for (std::size_t i = 0; i < env.types.size(); ++i) f.x[t][i] = f.q[t][i] * env.value(i, t);
  }
  return f;
}

namespace {

Rational interim_utility(const AuctionEnvironment& env, const std::vector<std::vector<std::vector<Rational>>>& beliefs,
                         const AllocationSCF& f, std::size_t i, std::size_t t_i, std::size_t report) {
  MixedRadix ts = env.type_space();
  MixedRadix opp = ts.without(i);
  Rational r = 0;
  for (std::size_t k = 0; k < opp.size(); ++k) {
    std::size_t truth = ts.merge(i, t_i, k);
    std::size_t rep = ts.merge(i, report, k);
    r += beliefs[i][t_i][k] * (f.q[rep][i] * env.value(i, truth) - f.x[rep][i]);
  }
  return r;
}

}  // namespace

Rational allocation_interim(const AuctionEnvironment& env, const AllocationSCF& f, std::size_t i,
                            std::size_t t_i, std::size_t report) {
  return interim_utility(env, env.beliefs(), f, i, t_i, report);
}

bool allocation_bic(const AuctionEnvironment& env, const AllocationSCF& f) {
  require_valid(env);
  require_shape(env, f);
  auto beliefs = env.beliefs();
  for (std::size_t i = 0; i < env.types.size(); ++i) {
    for (std::size_t t = 0; t < env.types[i].size(); ++t) {
      Rational truthful = interim_utility(env, beliefs, f, i, t, t);
      for (std::size_t r = 0; r < env.types[i].size(); ++r) {
        if (interim_utility(env, beliefs, f, i, t, r) > truthful) return false;
      }
    }
  }
  return true;
}

EncodedAllocation encode_allocation(const AuctionEnvironment& env, const std::vector<AllocationSCF>& F) {
  require_valid(env);
  MixedRadix ts = env.type_space();
  const std::size_t I = env.types.size();
  EncodedAllocation out;
  Environment& g = out.env;
  for (std::size_t i = 0; i < I; ++i) g.agents.push_back("bidder" + std::to_string(i));
  g.types = type_labels(env);
  g.beliefs = env.beliefs();
  std::map<std::pair<std::vector<Rational>, std::vector<Rational>>, std::size_t> index;
  std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> alloc;
  std::vector<std::vector<std::size_t>> chosen(F.size(), std::vector<std::size_t>(ts.size()));
  for (std::size_t n = 0; n < F.size(); ++n) {
    require_shape(env, F[n]);
    for (std::size_t t = 0; t < ts.size(); ++t) {
      auto key = std::make_pair(F[n].q[t], F[n].x[t]);
      auto [it, fresh] = index.emplace(key, alloc.size());
      if (fresh) alloc.push_back(key);
      chosen[n][t] = it->second;
    }
  }
  for (const auto& [q, x] : alloc) g.outcomes.push_back(allocation_label(q, x));
  g.utility.assign(I, std::vector<std::vector<Rational>>(alloc.size(), std::vector<Rational>(ts.size())));
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t a = 0; a < alloc.size(); ++a) {
      for (std::size_t t = 0; t < ts.size(); ++t) {
        g.utility[i][a][t] = alloc[a].first[i] * env.value(i, t) - alloc[a].second[i];
      }
    }
  }
  for (std::size_t n = 0; n < F.size(); ++n) {
    SCF f;
    f.name = F[n].name;
    for (std::size_t t = 0; t < ts.size(); ++t) f.value.push_back(Lottery::point(chosen[n][t], alloc.size()));
    out.scfs.push_back(std::move(f));
  }
  return out;
}

SurplusReport surplus_extraction_check(const AuctionEnvironment& env, const std::vector<AllocationSCF>& F) {
  require_valid(env);
  if (F.empty()) throw InputError("empty-scs", "social choice set must be nonempty", "F");
  MixedRadix ts = env.type_space();
  const std::size_t I = env.types.size();
  SurplusReport rep;
  rep.increasing_values = true;  // enforced by validate()
  rep.fully_extractive = true;
  rep.inclusive = true;
  // Lowest-ranked type with positive winning probability, per (f, i).
  std::vector<std::vector<std::optional<std::size_t>>> low(F.size(), std::vector<std::optional<std::size_t>>(I));
  for (std::size_t n = 0; n < F.size(); ++n) {
    require_shape(env, F[n]);
    for (std::size_t t = 0; t < ts.size(); ++t) {
      for (std::size_t i = 0; i < I; ++i) {
        if (F[n].x[t][i] != F[n].q[t][i] * env.value(i, t)) rep.fully_extractive = false;
        std::size_t own = ts.digit(t, i);
        if (F[n].q[t][i] > 0 && own + 1 < env.types[i].size() && (!low[n][i] || own < *low[n][i])) {
          low[n][i] = own;
        }
      }
    }
    for (std::size_t i = 0; i < I; ++i) {
      if (!low[n][i]) rep.inclusive = false;
    }
  }
  if (!rep.preconditions()) {
    rep.note = !rep.fully_extractive ? "not fully extractive" : "not inclusive";
    return rep;
  }
  for (std::size_t i = 0; i < I; ++i) {
    const std::size_t top = env.types[i].size() - 1;
    for (std::size_t n = 0; n < F.size(); ++n) {
      SurplusWitness w{n, i, top, *low[n][i], Rational(0)};
      w.gain = allocation_interim(env, F[n], i, top, w.report) - allocation_interim(env, F[n], i, top, top);
      rep.witnesses.push_back(w);
    }
  }
  EncodedAllocation enc = encode_allocation(env, F);
  for (const auto& cell : partial_bic_witnesses(enc.env, enc.scfs)) {
    if (!cell.witness) rep.partial_bic_fails = true;
  }
  rep.note = rep.partial_bic_fails ? "no member of F is BIC at some top-type cell" : "unexpected: every cell has a BIC member";
  return rep;
}

RevenueEquivalenceReport revenue_equivalence_check(const AuctionEnvironment& env, const AllocationSCF& f,
                                                   const AllocationSCF& g) {
  require_valid(env);
  require_shape(env, f);
  require_shape(env, g);
  RevenueEquivalenceReport rep;
  if (f.q != g.q) {
    rep.precondition_failure = "allocations differ: not assignment-equivalent";
    return rep;
  }
  if (!allocation_bic(env, f)) {
    rep.precondition_failure = "'" + f.name + "' is not BIC";
    return rep;
  }
  if (!allocation_bic(env, g)) {
    rep.precondition_failure = "'" + g.name + "' is not BIC";
    return rep;
  }
  rep.precondition_ok = true;
  auto beliefs = env.beliefs();
  for (std::size_t i = 0; i < env.types.size(); ++i) {
    const std::size_t n = env.types[i].size();
    Rational fx0 = interim_x(env, beliefs, f, i, 0), gx0 = interim_x(env, beliefs, g, i, 0);
    Rational bound = 0, prev_q = interim_q(env, beliefs, f, i, 0);
    for (std::size_t k = 0; k < n; ++k) {
      Rational gap = abs((interim_x(env, beliefs, f, i, k) - fx0) - (interim_x(env, beliefs, g, i, k) - gx0));
      if (gap > rep.max_gap) {
        rep.max_gap = gap;
        rep.agent = i;
        rep.type = k;
      }
      if (k > 0) {
        Rational q = interim_q(env, beliefs, f, i, k);
        bound += (env.types[i][k] - env.types[i][k - 1]) * abs(q - prev_q);
        prev_q = q;
      }
    }
    rep.envelope_bound = std::max(rep.envelope_bound, bound);
  }
  rep.within_bound = rep.max_gap <= rep.envelope_bound;
  return rep;
}

}  // namespace mechlab
