#include "mechlab/applications.hpp"

namespace mechlab {

using lp::Sense;
using lp::Term;
using lp::VarKind;

namespace {

void check_side(const std::vector<Rational>& support, const std::vector<Rational>& prior,
                const std::string& side, std::vector<Diagnostic>& out) {
  if (support.empty()) out.push_back({"empty-support", side + " support is empty", side});
  if (support.size() != prior.size()) {
    out.push_back({"shape-mismatch", side + " prior length differs from support", side + "_prior"});
    return;
  }
  Rational total = 0;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior[k] <= 0) {
      out.push_back({"belief-not-positive", side + " prior must have full support",
                     side + "_prior[" + std::to_string(k) + "]"});
    }
    total += prior[k];
  }
  if (total != 1) out.push_back({"belief-not-normalized", side + " prior sums to " + to_string(total), side + "_prior"});
}

std::vector<Rational> uniform(std::size_t n) {
  return std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n)));
}

struct Interim {
  std::vector<std::vector<Rational>> q;  // [v][c]
  std::vector<Rational> buyer_q;         // Q_B(v) = E_c q
  std::vector<Rational> seller_q;        // Q_S(c) = E_v q
};

Interim interim_trade(const TradeEnvironment& env, const EfficiencyRule& rule) {
  const std::size_t nv = env.buyer_values.size(), nc = env.seller_costs.size();
  Interim r;
  r.q.assign(nv, std::vector<Rational>(nc));
  r.buyer_q.assign(nv, Rational(0));
  r.seller_q.assign(nc, Rational(0));
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      r.q[v][c] = rule.trade_probability(env.buyer_values[v], env.seller_costs[c]);
      r.buyer_q[v] += env.seller_prior[c] * r.q[v][c];
      r.seller_q[c] += env.buyer_prior[v] * r.q[v][c];
    }
  }
  return r;
}

// Appends buyer IR and BIC rows on variable block xb[v][c] (buyer pays).
void add_buyer_rows(lp::Problem& p, const TradeEnvironment& env, const Interim& in,
                    const std::vector<std::vector<std::size_t>>& xb) {
  const std::size_t nv = env.buyer_values.size(), nc = env.seller_costs.size();
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      p.add_constraint({{xb[v][c], Rational(1)}}, Sense::LessEq, in.q[v][c] * env.buyer_values[v],
                       "ir.buyer[" + std::to_string(v) + "," + std::to_string(c) + "]");
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t w = 0; w < nv; ++w) {
      if (v == w) continue;
      std::vector<Term> terms;
      for (std::size_t c = 0; c < nc; ++c) {
        terms.push_back({xb[v][c], -env.seller_prior[c]});
        terms.push_back({xb[w][c], env.seller_prior[c]});
      }
      p.add_constraint(std::move(terms), Sense::GreaterEq,
                       (in.buyer_q[w] - in.buyer_q[v]) * env.buyer_values[v],
                       "bic.buyer[" + std::to_string(v) + "->" + std::to_string(w) + "]");
    }
  }
}

// Appends seller IR and BIC rows on variable block xs[v][c] (seller receives).
void add_seller_rows(lp::Problem& p, const TradeEnvironment& env, const Interim& in,
                     const std::vector<std::vector<std::size_t>>& xs) {
  const std::size_t nv = env.buyer_values.size(), nc = env.seller_costs.size();
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      p.add_constraint({{xs[v][c], Rational(1)}}, Sense::GreaterEq, in.q[v][c] * env.seller_costs[c],
                       "ir.seller[" + std::to_string(v) + "," + std::to_string(c) + "]");
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t d = 0; d < nc; ++d) {
      if (c == d) continue;
      std::vector<Term> terms;
      for (std::size_t v = 0; v < nv; ++v) {
        terms.push_back({xs[v][c], env.buyer_prior[v]});
        terms.push_back({xs[v][d], -env.buyer_prior[v]});
      }
      p.add_constraint(std::move(terms), Sense::GreaterEq,
                       (in.seller_q[c] - in.seller_q[d]) * env.seller_costs[c],
                       "bic.seller[" + std::to_string(c) + "->" + std::to_string(d) + "]");
    }
  }
}

std::vector<std::vector<std::size_t>> variable_block(lp::Problem& p, std::size_t nv, std::size_t nc,
                                                     const std::string& name) {
  std::vector<std::vector<std::size_t>> var(nv, std::vector<std::size_t>(nc));
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      var[v][c] = p.add_variable(VarKind::Free, name + "[" + std::to_string(v) + "," + std::to_string(c) + "]");
    }
  }
  return var;
}

}  // namespace

std::vector<Diagnostic> TradeEnvironment::validate() const {
  std::vector<Diagnostic> out;
  check_side(buyer_values, buyer_prior, "buyer", out);
  check_side(seller_costs, seller_prior, "seller", out);
  return out;
}

TradeEnvironment uniform_trade_grid(std::size_t n) {
  if (n < 2) throw InputError("grid-too-small", "trade grid needs at least 2 points", "n");
  std::vector<Rational> pts;
  for (std::size_t j = 0; j < n; ++j) pts.emplace_back(j, n - 1);
  for (auto& p : pts) p.canonicalize();
  return uniform_trade_support(pts, pts);
}

TradeEnvironment uniform_trade_support(std::vector<Rational> values, std::vector<Rational> costs) {
  TradeEnvironment env;
  env.buyer_prior = uniform(values.size());
  env.seller_prior = uniform(costs.size());
  env.buyer_values = std::move(values);
  env.seller_costs = std::move(costs);
  return env;
}

Rational EfficiencyRule::trade_probability(const Rational& v, const Rational& c) const {
  if (v > c) return 1;
  if (v == c && tie == TieRule::Trade) return 1;
  return 0;
}

FeasibilityProblem build_budget_balanced_problem(const TradeEnvironment& env, const EfficiencyRule& rule) {
  auto diags = env.validate();
  if (!diags.empty()) throw InputError(std::move(diags));
  Interim in = interim_trade(env, rule);
  FeasibilityProblem fp;
  fp.q = in.q;
  fp.var = variable_block(fp.lp, env.buyer_values.size(), env.seller_costs.size(), "x");
  add_buyer_rows(fp.lp, env, in, fp.var);
  add_seller_rows(fp.lp, env, in, fp.var);
  return fp;
}

MsResult ms_feasibility(const TradeEnvironment& env, const EfficiencyRule& rule) {
  FeasibilityProblem fp = build_budget_balanced_problem(env, rule);
  lp::Solution sol = lp::solve(fp.lp);
  MsResult r;
  r.pivots = sol.pivots;
  if (sol.status == lp::Status::Optimal) {
    r.feasible = true;
    r.transfers.assign(fp.var.size(), std::vector<Rational>(fp.var.front().size()));
    for (std::size_t v = 0; v < fp.var.size(); ++v) {
      for (std::size_t c = 0; c < fp.var[v].size(); ++c) r.transfers[v][c] = sol.x[fp.var[v][c]];
    }
    r.verified = lp::is_feasible_point(fp.lp, sol.x);
  } else {
    r.certificate = sol.dual;
    r.verified = lp::verify_infeasibility(fp.lp, sol.dual);
  }
  return r;
}

SubsidyResult minimal_subsidy(const TradeEnvironment& env, const EfficiencyRule& rule) {
  auto diags = env.validate();
  if (!diags.empty()) throw InputError(std::move(diags));
  const std::size_t nv = env.buyer_values.size(), nc = env.seller_costs.size();
  Interim in = interim_trade(env, rule);

  // The objective separates: maximise E[x_B] and minimise E[x_S]. Each side
  // reduces exactly to interim transfers, one variable per own type.
  lp::Problem buyer;
  std::vector<std::size_t> X(nv);
  for (std::size_t v = 0; v < nv; ++v) X[v] = buyer.add_variable(VarKind::Free);
  for (std::size_t v = 0; v < nv; ++v) {
    buyer.add_constraint({{X[v], Rational(1)}}, Sense::LessEq, in.buyer_q[v] * env.buyer_values[v]);
  }
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t w = 0; w < nv; ++w) {
      if (v == w) continue;
      buyer.add_constraint({{X[v], Rational(-1)}, {X[w], Rational(1)}}, Sense::GreaterEq,
                           (in.buyer_q[w] - in.buyer_q[v]) * env.buyer_values[v]);
    }
  }
  std::vector<Term> bobj;
  for (std::size_t v = 0; v < nv; ++v) bobj.push_back({X[v], -env.buyer_prior[v]});
  buyer.set_objective(bobj);

  lp::Problem seller;
  std::vector<std::size_t> Y(nc);
  for (std::size_t c = 0; c < nc; ++c) Y[c] = seller.add_variable(VarKind::Free);
  for (std::size_t c = 0; c < nc; ++c) {
    seller.add_constraint({{Y[c], Rational(1)}}, Sense::GreaterEq, in.seller_q[c] * env.seller_costs[c]);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t d = 0; d < nc; ++d) {
      if (c == d) continue;
      seller.add_constraint({{Y[c], Rational(1)}, {Y[d], Rational(-1)}}, Sense::GreaterEq,
                            (in.seller_q[c] - in.seller_q[d]) * env.seller_costs[c]);
    }
  }
  std::vector<Term> sobj;
  for (std::size_t c = 0; c < nc; ++c) sobj.push_back({Y[c], env.seller_prior[c]});
  seller.set_objective(sobj);

  lp::Solution bs = lp::solve(buyer);
  lp::Solution ss = lp::solve(seller);
  if (bs.status != lp::Status::Optimal || ss.status != lp::Status::Optimal) {
    throw std::logic_error("interim transfer LP not optimal");
  }

  SubsidyResult r;
  r.minimal_subsidy = ss.objective + bs.objective;

  // Full ex-post system on which everything is re-verified.
  lp::Problem& full = r.full_problem;
  auto xb = variable_block(full, nv, nc, "xb");
  auto xs = variable_block(full, nv, nc, "xs");
  std::vector<Term> obj;
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      Rational p = env.buyer_prior[v] * env.seller_prior[c];
      obj.push_back({xb[v][c], -p});
      obj.push_back({xs[v][c], p});
    }
  }
  full.set_objective(obj);
  add_buyer_rows(full, env, in, xb);
  add_seller_rows(full, env, in, xs);

  // Lift the interim solutions: constant surplus across opponent types.
  std::vector<Rational> x(full.num_vars());
  r.buyer_pays.assign(nv, std::vector<Rational>(nc));
  r.seller_receives.assign(nv, std::vector<Rational>(nc));
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      Rational b = in.q[v][c] * env.buyer_values[v] - (in.buyer_q[v] * env.buyer_values[v] - bs.x[X[v]]);
      Rational s = in.q[v][c] * env.seller_costs[c] + (ss.x[Y[c]] - in.seller_q[c] * env.seller_costs[c]);
      r.buyer_pays[v][c] = b;
      r.seller_receives[v][c] = s;
      x[xb[v][c]] = b;
      x[xs[v][c]] = s;
    }
  }

  // Lift the duals: IR multipliers spread by the opponent prior, BIC
  // multipliers carried over unchanged. Row order follows add_*_rows.
  const std::size_t buyer_bic = nv * (nv - 1), seller_bic = nc * (nc - 1);
  std::vector<Rational> y;
  y.reserve(full.num_constraints());
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) y.push_back(bs.dual[v] * env.seller_prior[c]);
  }
  for (std::size_t k = 0; k < buyer_bic; ++k) y.push_back(bs.dual[nv + k]);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t c = 0; c < nc; ++c) y.push_back(ss.dual[c] * env.buyer_prior[v]);
  }
  for (std::size_t k = 0; k < seller_bic; ++k) y.push_back(ss.dual[nc + k]);

  r.dual = y;
  r.primal_verified = lp::is_feasible_point(full, x) && full.objective_value(x) == r.minimal_subsidy;
  r.certified_bound = lp::dual_bound(full, y);
  r.dual_verified = lp::is_dual_feasible(full, y) && r.certified_bound == r.minimal_subsidy;
  return r;
}

}  // namespace mechlab
