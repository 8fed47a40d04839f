#include "mechlab/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "mechlab/applications.hpp"
#include "mechlab/choice.hpp"
#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/epistemic.hpp"
#include "mechlab/instance_io.hpp"
#include "mechlab/properties.hpp"
#include "mechlab/report.hpp"

namespace mechlab {

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& s, const std::string& flag) {
  std::vector<Rational> out;
  for (const auto& part : split(s, ',')) {
    auto r = try_parse_rational(part);
    if (!r) throw InputError("bad-flag", "malformed rational '" + part + "'", flag);
    out.push_back(*r);
  }
  return out;
}

std::string mixed_label(const MixedAction& m, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (m[a] == 1) return labels[a];
    if (m[a] == 0) continue;
    if (!out.empty()) out += '|';
    out += labels[a] + ":" + to_string(m[a]);
  }
  return out;
}

struct ConceptOptions {
  std::string concept_name = "bne";
  std::size_t k_max = 0;
  std::string anchor;
  std::string chi;
  std::vector<std::string> restrict_actions;  // "AGENT=A,B"
  bool serial = false;

  void attach(CLI::App* sub) {
    sub->add_option("--concept", concept_name, "Solution concept")
        ->check(CLI::IsMember({"bne", "level-k", "icr", "delta", "cursed"}));
    sub->add_option("--k-max", k_max, "Highest reasoning level (level-k)");
    sub->add_option("--anchor", anchor, "Level-0 anchor")->check(CLI::IsMember({"uniform", "truthful"}));
    sub->add_option("--chi", chi, "Cursedness in [0,1] as p/q");
    sub->add_option("--restrict", restrict_actions, "Delta restriction AGENT=A,B (repeatable)");
    sub->add_flag("--serial", serial, "Use the serial kernels");
  }
  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
};

struct Solved {
  SolutionSet solset;
  std::optional<LevelKResult> level_k;
  std::optional<RationalizableResult> rationalizable;
};

Solved solve_with(const Instance& inst, const ConceptOptions& o) {
  if (!inst.mech) throw InputError("missing-field", "instance has no mechanism", "mechanism");
  const Environment& env = inst.env;
  const Mechanism& mech = *inst.mech;
  Solved out;
  if (o.concept_name == "bne") {
    out.solset = solve_pure_bne(env, mech, o.exec());
  } else if (o.concept_name == "level-k") {
    LevelKConfig cfg;
    cfg.k_max = o.k_max ? o.k_max : inst.settings.k_max.value_or(1);
    if (inst.settings.anchor) cfg.anchor = *inst.settings.anchor;
    if (o.anchor == "uniform") cfg.anchor = AnchorSpec{AnchorKind::Uniform, {}};
    if (o.anchor == "truthful") cfg.anchor = AnchorSpec{AnchorKind::TruthfulLabel, {}};
    out.level_k = solve_level_k(env, mech, cfg);
    out.solset = out.level_k->solutions;
  } else if (o.concept_name == "icr" || o.concept_name == "delta") {
    std::optional<DeltaRestriction> restriction;
    std::optional<std::vector<std::vector<std::size_t>>> sets = inst.settings.delta_actions;
    if (!o.restrict_actions.empty()) {
      std::vector<std::vector<std::size_t>> allowed(env.num_agents());
      for (std::size_t j = 0; j < env.num_agents(); ++j) {
        for (std::size_t a = 0; a < mech.num_actions(j); ++a) allowed[j].push_back(a);
      }
      for (const auto& spec : o.restrict_actions) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw InputError("bad-flag", "expected AGENT=A,B", "--restrict");
        std::string agent = spec.substr(0, eq);
        auto it = std::find(env.agents.begin(), env.agents.end(), agent);
        if (it == env.agents.end()) throw InputError("unknown-label", "undeclared agent '" + agent + "'", "--restrict");
        std::size_t j = static_cast<std::size_t>(it - env.agents.begin());
        allowed[j].clear();
        for (const auto& lab : split(spec.substr(eq + 1), ',')) {
          auto a = std::find(mech.actions[j].begin(), mech.actions[j].end(), lab);
          if (a == mech.actions[j].end()) throw InputError("unknown-label", "undeclared action '" + lab + "'", "--restrict");
          allowed[j].push_back(static_cast<std::size_t>(a - mech.actions[j].begin()));
        }
        std::sort(allowed[j].begin(), allowed[j].end());
      }
      sets = allowed;
    }
    if (o.concept_name == "delta" && sets) restriction = DeltaRestriction::from_action_sets(env, mech, *sets);
    out.rationalizable = solve_rationalizable(env, mech, restriction, o.exec());
    out.solset = out.rationalizable->solutions;
  } else {
    CursedConfig cfg;
    cfg.chi = inst.settings.chi.value_or(Rational(0));
    if (!o.chi.empty()) {
      auto r = try_parse_rational(o.chi);
      if (!r || *r < 0 || *r > 1) throw InputError("bad-flag", "chi must be a rational in [0, 1]", "--chi");
      cfg.chi = *r;
    }
    out.solset = solve_cursed(env, mech, cfg, o.exec());
  }
  return out;
}

void list_solutions(Report& rep, const Environment& env, const Mechanism& mech, const SolutionSet& s) {
  auto& b = rep.block("solutions", {"profile", "agent", "type", "action"});
  for (std::size_t p = 0; p < s.size(); ++p) {
    const StrategyProfile& sp = s.profiles[p];
    if (sp.product_form) {
      for (std::size_t i = 0; i < env.num_agents(); ++i) {
        for (std::size_t t = 0; t < env.num_types(i); ++t) {
          b.add({std::to_string(p), env.agents[i], env.types[i][t], mixed_label(sp.marginals[i][t], mech.actions[i])});
        }
      }
    } else {
      std::vector<std::string> labels;
      for (std::size_t s2 = 0; s2 < mech.action_space().size(); ++s2) labels.push_back(action_profile_label(mech, s2));
      for (std::size_t t = 0; t < sp.play.size(); ++t) {
        b.add({std::to_string(p), "*", type_profile_label(env, t), describe(sp.play[t], labels)});
      }
    }
  }
  rep.block("summary", {"concept", "profiles"}).add({s.concept_tag, std::to_string(s.size())});
}

void add_violation(Report& rep, const Environment& env, const BicViolation& v) {
  rep.block("violation", {"agent", "type", "report", "truthful", "misreport", "gap"})
      .add({env.agents[v.agent], env.types[v.agent][v.type], env.types[v.agent][v.report], to_string(v.truthful),
            to_string(v.misreport), to_string(v.gap)});
}

void add_reproduce(Report& rep, const std::string& command) { rep.block("reproduce", {"command"}).add({command}); }

void add_error_block(Report& rep, const std::vector<Diagnostic>& ds) {
  auto& b = rep.block("errors", {"code", "path", "line", "column", "message"});
  for (const auto& d : ds) b.add({d.code, d.path, std::to_string(d.line), std::to_string(d.column), d.message});
}

struct Loaded {
  Instance inst;
  std::string digest;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file-not-found", "cannot open '" + path + "'", path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  return {parse_instance_text(text, path), sha256_hex(text)};
}

const SCF& require_scf(const Instance& inst) {
  if (inst.scfs.empty()) throw InputError("missing-field", "instance has no scf", "scf");
  return inst.scfs.front();
}

InstanceSizes parse_sizes(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 4) throw InputError("bad-flag", "sizes are agents,types,actions,outcomes", "--sizes");
  std::vector<std::size_t> v;
  for (const auto& p : parts) {
    try {
      std::size_t pos = 0;
      unsigned long x = std::stoul(p, &pos);
      if (pos != p.size() || x == 0) throw std::invalid_argument(p);
      v.push_back(x);
    } catch (const std::exception&) {
      throw InputError("bad-flag", "sizes must be positive integers", "--sizes");
    }
  }
  return {v[0], v[1], v[2], v[3]};
}

std::string sizes_str(const InstanceSizes& s) {
  return std::to_string(s.agents) + "," + std::to_string(s.types) + "," + std::to_string(s.actions) + "," +
         std::to_string(s.outcomes);
}

// ---- subcommand bodies ----

void cmd_solve(Report& rep, const Instance& inst, const ConceptOptions& o) {
  Solved s = solve_with(inst, o);
  list_solutions(rep, inst.env, *inst.mech, s.solset);
  if (s.level_k) {
    auto& b = rep.block("levels", {"level", "agent", "strategy"});
    for (std::size_t k = 0; k < s.level_k->levels.size(); ++k) {
      for (std::size_t i = 0; i < inst.env.num_agents(); ++i) {
        for (const auto& st : s.level_k->levels[k][i]) {
          std::string lab;
          for (std::size_t t = 0; t < st.size(); ++t) {
            lab += (t ? ";" : "") + inst.env.types[i][t] + "->" + inst.mech->actions[i][st[t]];
          }
          b.add({std::to_string(k + 1), inst.env.agents[i], lab});
        }
      }
    }
  }
  if (s.rationalizable) {
    auto& b = rep.block("surviving", {"agent", "type", "actions"});
    for (std::size_t i = 0; i < inst.env.num_agents(); ++i) {
      for (std::size_t t = 0; t < inst.env.num_types(i); ++t) {
        std::string lab;
        for (std::size_t a : s.rationalizable->surviving[i][t]) lab += (lab.empty() ? "" : "|") + inst.mech->actions[i][a];
        b.add({inst.env.agents[i], inst.env.types[i][t], lab});
      }
    }
    rep.block("rounds", {"rounds"}).add({std::to_string(s.rationalizable->rounds)});
  }
  rep.verdict = Verdict::Pass;
}

void cmd_check(Report& rep, const Instance& inst, const std::string& property, const ConceptOptions& o,
               const std::string& command) {
  const Environment& env = inst.env;
  if (property == "bic") {
    BicReport r = check_bic(env, require_scf(inst));
    rep.block("bic", {"holds"}).add({bool_str(r.holds)});
    if (r.violation) add_violation(rep, env, *r.violation);
    rep.verdict = r.holds ? Verdict::Pass : Verdict::Fail;
  } else if (property == "sirbic") {
    SirbicReport r = check_sirbic(env, require_scf(inst));
    rep.block("sirbic", {"holds", "failure"}).add({bool_str(r.holds), describe(r.failure)});
    if (r.witness) add_violation(rep, env, *r.witness);
    if (r.differing_opponent_types && r.witness) {
      rep.block("responsive", {"opponent_types"}).add({opponent_type_label(env, r.witness->agent, *r.differing_opponent_types)});
    }
    rep.verdict = r.holds ? Verdict::Pass : Verdict::Fail;
  } else if (property == "partial-bic") {
    if (inst.scfs.empty()) throw InputError("missing-field", "instance has no scf or scs", "scs");
    auto cells = partial_bic_witnesses(env, inst.scfs);
    auto& b = rep.block("partial-bic", {"agent", "type", "witness"});
    bool all = true;
    for (const auto& c : cells) {
      b.add({env.agents[c.agent], env.types[c.agent][c.type], c.witness ? inst.scfs[*c.witness].name : "none"});
      all = all && c.witness.has_value();
    }
    if (!all) {
      auto& v = rep.block("misreports", {"scf", "agent", "type", "report", "gain"});
      for (const auto& c : cells) {
        if (c.witness) continue;
        for (std::size_t f = 0; f < inst.scfs.size(); ++f) {
          for (std::size_t r = 0; r < env.num_types(c.agent); ++r) {
            Rational g = misreport_gain(env, inst.scfs[f], c.agent, c.type, r);
            if (g > 0) {
              v.add({inst.scfs[f].name, env.agents[c.agent], env.types[c.agent][c.type], env.types[c.agent][r], to_string(g)});
              break;
            }
          }
        }
      }
    }
    rep.verdict = all ? Verdict::Pass : Verdict::Fail;
  } else {
    Solved s = solve_with(inst, o);
    list_solutions(rep, env, *inst.mech, s.solset);
    if (property == "implements") {
      if (inst.scfs.empty()) throw InputError("missing-field", "instance has no scf or scs", "scf");
      std::variant<SCF, SCS> target = inst.scfs.front();
      if (!(inst.has_scf && inst.scfs.size() == 1)) target = SCS(inst.scfs.begin() + (inst.has_scf ? 1 : 0), inst.scfs.end());
      ImplementReport r = check_implements(env, *inst.mech, s.solset, target);
      auto& b = rep.block("implements", {"holds", "failure", "profile", "type_profile", "member"});
      b.add({bool_str(r.holds), describe(r.failure), r.profile ? std::to_string(*r.profile) : "",
             r.type_profile ? type_profile_label(env, *r.type_profile) : "",
             r.member ? std::to_string(*r.member) : ""});
      rep.verdict = r.holds ? Verdict::Pass : Verdict::Fail;
    } else {
      PropertyVerdict v;
      if (property == "wsc") v = check_wsc(env, *inst.mech, s.solset);
      else if (property == "twsc") v = check_twsc(env, *inst.mech, s.solset);
      else v = check_sc(env, *inst.mech, s.solset);
      auto& b = rep.block(property, {"agent", "type", "witness_profile"});
      for (const auto& c : v.cells) {
        b.add({env.agents[c.agent], env.types[c.agent][c.type], c.witness ? std::to_string(*c.witness) : "none"});
      }
      rep.block("verdict-detail", {"holds", "vacuous", "profile", "note"})
          .add({bool_str(v.holds), bool_str(v.vacuous), v.profile ? std::to_string(*v.profile) : "", v.note});
      if (v.violation) add_violation(rep, env, *v.violation);
      rep.verdict = v.holds ? Verdict::Pass : Verdict::Fail;
    }
  }
  if (rep.verdict == Verdict::Fail) add_reproduce(rep, command);
}

void cmd_sweep(Report& rep, const std::string& theorem, std::size_t trials, std::uint64_t seed, const InstanceSizes& sizes,
               std::size_t first_trial, bool serial) {
  auto th = parse_theorem(theorem);
  if (!th) throw InputError("bad-flag", "theorem must be T1..T5", "--theorem");
  SweepReport r = validate_theorem(*th, trials, sizes, seed, serial ? Exec::Serial : Exec::Parallel, first_trial);
  auto& sum = rep.block("summary", {"theorem", "trials", "first_trial", "sizes", "counterexamples", "status"});
  sum.add({to_string(*th), std::to_string(trials), std::to_string(first_trial), sizes_str(sizes),
           std::to_string(r.counterexamples), r.status});
  auto& hyp = rep.block("hypothesis-met", {"check", "count"});
  for (const auto& [name, count] : r.hypothesis_met) hyp.add({name, std::to_string(count)});
  rep.block("trials", {}).raw = r.to_csv();
  rep.verdict = r.counterexamples == 0 ? Verdict::Pass : Verdict::Fail;
  for (const auto& row : r.rows) {
    if (row.status != "counterexample") continue;
    add_reproduce(rep, "mechlab sweep --theorem " + to_string(*th) + " --trials 1 --first-trial " + std::to_string(row.index) +
                           " --seed " + std::to_string(seed) + " --sizes " + sizes_str(sizes));
    break;
  }
}

struct AppOptions {
  std::string name;
  std::size_t grid = 0;
  std::size_t levels = 2;
  std::string price_weight = "1/2";
  std::string values, costs;
  std::string tie = "trade";
  bool subsidy = false;
  std::size_t bidders = 2;
  std::string types;
  bool serial = false;
};

Rational nearest_index_value(const TradeInstance& t, const Rational& x, std::size_t& idx) {
  Rational best_d = -1;
  for (std::size_t m = 0; m < t.grid_n; ++m) {
    Rational d = abs(t.value(m) - x);
    if (best_d < 0 || d < best_d) {
      best_d = d;
      idx = m;
    }
  }
  return t.value(idx);
}

void cmd_app(Report& rep, const AppOptions& o, const std::string& command) {
  if (o.name == "double-auction") {
    TradeInstance ti;
    ti.grid_n = o.grid ? o.grid : 201;
    auto w = try_parse_rational(o.price_weight);
    if (!w) throw InputError("bad-flag", "malformed price weight", "--price-weight");
    ti.price_weight = *w;
    DoubleAuctionResult r = double_auction_level_k(ti, std::max<std::size_t>(o.levels, 2),
                                                   o.serial ? Exec::Serial : Exec::Parallel);
    const Rational step = ti.step();
    auto& b = rep.block("closed-forms", {"level", "side", "form", "max_selected_steps", "max_set_steps", "worst_value", "within_one_step"});
    bool ok = true;
    struct Row {
      std::size_t level;
      bool buyer;
      ClosedForm form;
    };
    for (const Row& row : {Row{1, true, ClosedForm::BuyerLevel1}, Row{1, false, ClosedForm::SellerLevel1},
                           Row{2, true, ClosedForm::BuyerLevel2}, Row{2, false, ClosedForm::SellerLevel2LowBranch},
                           Row{2, false, ClosedForm::SellerLevel2HighBranch}}) {
      DeviationDiagnostic d = deviation(r, row.level, row.buyer, row.form);
      bool within = d.max_selected <= step;
      // The high-branch seller form is the exact best reply, reported alongside.
      if (row.form != ClosedForm::SellerLevel2HighBranch) ok = ok && within;
      b.add({std::to_string(row.level), row.buyer ? "buyer" : "seller", to_string(row.form),
             to_string(Rational(d.max_selected / step)), to_string(Rational(d.max_set / step)),
             to_string(ti.value(d.worst_type)), bool_str(within)});
    }
    std::size_t q = 0;
    Rational at = nearest_index_value(ti, Rational(1, 4), q);
    auto& tr = rep.block("trade-at-quarter", {"value", "level", "bid", "ask", "trades"});
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto& L = r.levels[k - 1];
      tr.add({to_string(at), std::to_string(k), to_string(ti.value(L.buyer.selected[q])),
              to_string(ti.value(L.seller.selected[q])), bool_str(r.trades(k, q, q))});
    }
    bool claim = r.trades(2, q, q) && !r.trades(1, q, q);
    ok = ok && claim;
    std::size_t v = 0, vr = 0;
    nearest_index_value(ti, Rational(1, 2), v);
    nearest_index_value(ti, Rational(3, 4), vr);
    Rational gain = r.imitation_gain(1, v, vr);
    rep.block("imitation", {"level", "value", "report", "gain", "gain_decimal"})
        .add({"1", to_string(ti.value(v)), to_string(ti.value(vr)), to_string(gain), std::to_string(gain.get_d())});
    ok = ok && gain > 0;
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
  } else if (o.name == "ms") {
    TradeEnvironment env;
    if (o.grid) env = uniform_trade_grid(o.grid);
    else if (!o.values.empty() && !o.costs.empty()) {
      env = uniform_trade_support(parse_rational_list(o.values, "--values"), parse_rational_list(o.costs, "--costs"));
    } else {
      throw InputError("bad-flag", "give --grid N or both --values and --costs", "app ms");
    }
    auto ds = env.validate();
    if (!ds.empty()) throw InputError(ds);
    EfficiencyRule rule{o.tie == "no-trade" ? TieRule::NoTrade : TieRule::Trade};
    if (o.subsidy) {
      SubsidyResult s = minimal_subsidy(env, rule);
      rep.block("subsidy", {"minimal_subsidy", "certified_bound", "primal_verified", "dual_verified"})
          .add({to_string(s.minimal_subsidy), to_string(s.certified_bound), bool_str(s.primal_verified), bool_str(s.dual_verified)});
      auto& b = rep.block("transfers", {"value", "cost", "buyer_pays", "seller_receives"});
      for (std::size_t a = 0; a < env.buyer_values.size(); ++a) {
        for (std::size_t c = 0; c < env.seller_costs.size(); ++c) {
          b.add({to_string(env.buyer_values[a]), to_string(env.seller_costs[c]), to_string(s.buyer_pays[a][c]),
                 to_string(s.seller_receives[a][c])});
        }
      }
      rep.verdict = s.primal_verified && s.dual_verified ? Verdict::Pass : Verdict::Fail;
    } else {
      MsResult m = ms_feasibility(env, rule);
      rep.block("feasibility", {"feasible", "verified", "pivots"})
          .add({bool_str(m.feasible), bool_str(m.verified), std::to_string(m.pivots)});
      if (m.feasible) {
        auto& b = rep.block("transfers", {"value", "cost", "transfer"});
        for (std::size_t a = 0; a < env.buyer_values.size(); ++a) {
          for (std::size_t c = 0; c < env.seller_costs.size(); ++c) {
            b.add({to_string(env.buyer_values[a]), to_string(env.seller_costs[c]), to_string(m.transfers[a][c])});
          }
        }
      } else {
        auto& b = rep.block("farkas-certificate", {"row", "multiplier"});
        for (std::size_t k = 0; k < m.certificate.size(); ++k) {
          if (m.certificate[k] != 0) b.add({std::to_string(k), to_string(m.certificate[k])});
        }
      }
      rep.verdict = m.feasible && m.verified ? Verdict::Pass : Verdict::Fail;
    }
  } else if (o.name == "surplus") {
    std::vector<std::vector<Rational>> types;
    if (o.types.empty()) throw InputError("bad-flag", "give --types \"1,2;1,2\"", "--types");
    for (const auto& part : split(o.types, ';')) types.push_back(parse_rational_list(part, "--types"));
    AuctionEnvironment env = uniform_auction(types);
    auto ds = env.validate();
    if (!ds.empty()) throw InputError(ds);
    SurplusReport s = surplus_extraction_check(env, {fully_extractive_rule(env)});
    rep.block("preconditions", {"fully_extractive", "inclusive", "increasing_values", "partial_bic_fails", "note"})
        .add({bool_str(s.fully_extractive), bool_str(s.inclusive), bool_str(s.increasing_values), bool_str(s.partial_bic_fails), s.note});
    auto& b = rep.block("witnesses", {"scf", "agent", "true_type", "report", "gain"});
    for (const auto& w : s.witnesses) {
      b.add({std::to_string(w.scf), std::to_string(w.agent), to_string(env.types[w.agent][w.true_type]),
             to_string(env.types[w.agent][w.report]), to_string(w.gain)});
    }
    if (!s.preconditions()) rep.verdict = Verdict::NotApplicable;
    else rep.verdict = s.partial_bic_fails ? Verdict::Pass : Verdict::Fail;
  } else if (o.name == "revenue") {
    AuctionEnvironment env = uniform_grid_auction(o.bidders, o.grid ? o.grid : 50);
    RevenueEquivalenceReport r = revenue_equivalence_check(env, second_price_rule(env), first_price_style_rule(env));
    const std::size_t n = o.grid ? o.grid : 50;
    rep.block("revenue", {"precondition_ok", "max_gap", "agent", "type", "envelope_bound", "within_bound", "C"})
        .add({bool_str(r.precondition_ok), to_string(r.max_gap), std::to_string(r.agent), std::to_string(r.type),
              to_string(r.envelope_bound), bool_str(r.within_bound),
              to_string(Rational(r.max_gap * static_cast<unsigned long>(n)))});
    if (!r.precondition_ok) rep.block("precondition", {"failure"}).add({r.precondition_failure});
    rep.verdict = !r.precondition_ok ? Verdict::NotApplicable : (r.within_bound ? Verdict::Pass : Verdict::Fail);
  }
  if (rep.verdict == Verdict::Fail) add_reproduce(rep, command);
}

void cmd_epistemic(Report& rep, const Instance& inst, const std::string& direction, const ConceptOptions& o,
                   std::optional<std::uint64_t> random_seed, const std::string& command) {
  Solved s = solve_with(inst, o);
  const Environment& env = inst.env;
  Direction d = direction == "2to1" ? Direction::WitnessesToModel : Direction::ModelToWitnesses;
  std::optional<EpistemicModel> model = inst.epistemic;
  if (d == Direction::ModelToWitnesses && random_seed) {
    std::mt19937_64 rng(*random_seed);
    model = random_epistemic_model(env, *inst.mech, rng);
  }
  EpistemicReport r = validate_epistemic_theorems(env, *inst.mech, s.solset, d, model);
  auto& b = rep.block("cells", {"agent", "type", "hypothesis", "holds", "h_star", "sol_covers", "selector_constant", "note"});
  for (const auto& c : r.cells) {
    b.add({env.agents[c.agent], env.types[c.agent][c.type], bool_str(c.hypothesis), bool_str(c.holds),
           c.h_star ? std::to_string(*c.h_star) : "", bool_str(c.sol_covers), bool_str(c.selector_constant), c.note});
  }
  if (r.model) {
    auto& m = rep.block("model", {"agent", "epistemic_type", "tau", "eta"});
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      for (std::size_t h = 0; h < r.model->num_epistemic_types(i); ++h) {
        m.add({env.agents[i], std::to_string(h), env.types[i][r.model->tau[i][h]],
               mixed_label(r.model->eta[i][h], inst.mech->actions[i])});
      }
    }
  }
  rep.block("summary", {"direction", "hypothesis_met", "holds", "note"})
      .add({direction, bool_str(r.hypothesis_met), bool_str(r.holds), r.note});
  if (d == Direction::WitnessesToModel) {
    rep.verdict = !r.hypothesis_met ? Verdict::NotApplicable : (r.holds ? Verdict::Pass : Verdict::Fail);
  } else {
    bool any = std::any_of(r.cells.begin(), r.cells.end(), [](const EpistemicCell& c) { return c.hypothesis; });
    rep.verdict = !any ? Verdict::NotApplicable : (r.holds ? Verdict::Pass : Verdict::Fail);
  }
  if (rep.verdict == Verdict::Fail) add_reproduce(rep, command);
}

// Expected-utility choice over an automatically assembled universe when the
// instance has no choice section.
ChoiceProfile choice_profile(const Instance& inst, const std::function<std::vector<IAAct>(std::size_t, std::size_t)>& acts) {
  const Environment& env = inst.env;
  ChoiceProfile C(env.num_agents());
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    for (std::size_t t = 0; t < env.num_types(i); ++t) {
      auto it = std::find_if(inst.choice.begin(), inst.choice.end(),
                             [&](const ChoiceSpec& c) { return c.agent == i && c.type == t; });
      if (it != inst.choice.end()) {
        C[i].push_back(it->build(env));
        continue;
      }
      auto u = dedupe(acts(i, t));
      if (u.size() > kMaxUniverse) throw InputError("universe-too-large", "more than 16 distinct acts", "choice");
      C[i].push_back(ChoiceCorrespondence::expected_utility(env, i, t, u));
    }
  }
  return C;
}

void cmd_choice(Report& rep, const Instance& inst, const std::string& mode, const ConceptOptions& o,
                const std::string& command) {
  const Environment& env = inst.env;
  if (mode == "ic" || mode == "qic") {
    const SCF& f = require_scf(inst);
    ChoiceProfile C = choice_profile(inst, [&](std::size_t i, std::size_t) { return direct_menu(env, f, i); });
    auto cells = check_ic_choice(env, f, C, mode == "ic" ? IcMode::IC : IcMode::QIC);
    auto& b = rep.block(mode, {"agent", "type", "holds", "menu"});
    bool all = true;
    for (const auto& c : cells) {
      b.add({env.agents[c.agent], env.types[c.agent][c.type], bool_str(c.holds), c.menu ? std::to_string(*c.menu) : ""});
      all = all && c.holds;
    }
    rep.verdict = all ? Verdict::Pass : Verdict::Fail;
  } else if (mode == "iia") {
    ChoiceProfile C = choice_profile(inst, [&](std::size_t, std::size_t) { return std::vector<IAAct>{}; });
    auto& b = rep.block("iia", {"agent", "type", "holds", "menu_x", "menu_y"});
    bool all = true;
    for (const auto& row : C) {
      for (const auto& c : row) {
        IiaVerdict v = check_iia(c);
        b.add({env.agents[c.agent()], env.types[c.agent()][c.type()], bool_str(v.holds), std::to_string(v.x), std::to_string(v.y)});
        all = all && v.holds;
      }
    }
    rep.verdict = all ? Verdict::Pass : Verdict::Fail;
  } else {
    Solved s = solve_with(inst, o);
    const Mechanism& mech = *inst.mech;
    ChoiceProfile C = choice_profile(inst, [&](std::size_t i, std::size_t t) {
      std::vector<IAAct> u;
      for (std::size_t p = 0; p < s.solset.size(); ++p) {
        const StrategyProfile& sp = s.solset.profiles[p];
        if (!sp.product_form) continue;
        for (auto& a : type_menu(env, mech, i, sp)) u.push_back(a);
        Expectation e = conjecture_from_profile(env, mech, sp, i, t);
        for (auto& a : action_menu(env, mech, i, e)) u.push_back(a);
        if (p < s.solset.provenance.size() && s.solset.provenance[p]) {
          for (auto& a : action_menu(env, mech, i, (*s.solset.provenance[p])[i][t])) u.push_back(a);
          for (std::size_t r = 0; r < env.num_types(i); ++r) {
            u.push_back(act_of(env, mech, i, sp.marginals[i][r], (*s.solset.provenance[p])[i][t]));
          }
        }
      }
      return u;
    });
    WccReport w = check_wcc(env, mech, s.solset, C);
    auto& b = rep.block("wcc", {"agent", "type", "witness_profile"});
    for (const auto& c : w.cells) {
      b.add({env.agents[c.agent], env.types[c.agent][c.type], c.witness ? std::to_string(*c.witness) : "none"});
    }
    rep.block("wcc-detail", {"holds", "vacuous", "cc_checked", "cc_holds", "all_iia", "choice_within_type_menu", "note"})
        .add({bool_str(w.holds), bool_str(w.vacuous), bool_str(w.cc_checked), bool_str(w.cc_holds), bool_str(w.all_iia),
              bool_str(w.choice_within_type_menu), w.note});
    rep.verdict = w.holds ? Verdict::Pass : Verdict::Fail;
  }
  if (rep.verdict == Verdict::Fail) add_reproduce(rep, command);
}

void cmd_corollary(Report& rep, std::size_t trials, std::uint64_t seed, std::size_t max_acts) {
  CorollarySweep s = choice_corollary_sweep(trials, seed, max_acts);
  rep.block("corollary", {"form", "trials", "hypothesis_met", "counterexamples"})
      .add({"literal", std::to_string(s.trials), std::to_string(s.hypothesis_met), std::to_string(s.counterexamples)});
  rep.blocks.back().add({"with-choice-inside-type-menu", std::to_string(s.trials), std::to_string(s.strengthened_met),
                         std::to_string(s.strengthened_counterexamples)});
  rep.block("sampler", {"iia_rejected"}).add({std::to_string(s.iia_rejected)});
  rep.verdict = s.counterexamples == 0 && s.strengthened_counterexamples == 0 ? Verdict::Pass : Verdict::Fail;
}

std::string join_command(const std::vector<std::string>& args) {
  std::string out = "mechlab";
  for (const auto& a : args) out += " " + a;
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Bayesian mechanism analysis"};
  app.require_subcommand(1);

  std::string instance_path;
  ConceptOptions concept_opts;

  auto* solve = app.add_subcommand("solve", "Compute a solution set");
  solve->add_option("instance", instance_path, "Instance file")->required();
  concept_opts.attach(solve);

  std::string property;
  auto* check = app.add_subcommand("check", "Check a property");
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("--property", property, "Property")
      ->required()
      ->check(CLI::IsMember({"bic", "sirbic", "wsc", "sc", "twsc", "implements", "partial-bic"}));
  concept_opts.attach(check);

  std::string theorem;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string sizes = "2,2,2,3";
  std::size_t workers = 0;
  std::size_t first_trial = 0;
  bool sweep_serial = false;
  auto* sweep = app.add_subcommand("sweep", "Randomised theorem sweep");
  sweep->add_option("--theorem", theorem, "T1..T5")->required();
  sweep->add_option("--trials", trials, "Number of trials");
  sweep->add_option("--seed", seed, "Base seed");
  sweep->add_option("--sizes", sizes, "agents,types,actions,outcomes");
  sweep->add_option("--workers", workers, "OpenMP threads (0 = available parallelism)");
  sweep->add_option("--first-trial", first_trial, "Index of the first trial");
  sweep->add_flag("--serial", sweep_serial, "Use the serial kernels");

  AppOptions app_opts;
  auto* appc = app.add_subcommand("app", "Applications");
  appc->add_option("--name", app_opts.name, "Application")
      ->required()
      ->check(CLI::IsMember({"double-auction", "ms", "surplus", "revenue"}));
  appc->add_option("--grid", app_opts.grid, "Grid size");
  appc->add_option("--levels", app_opts.levels, "Highest level (double-auction)");
  appc->add_option("--price-weight", app_opts.price_weight, "Weight on the bid in the price");
  appc->add_option("--values", app_opts.values, "Buyer values, comma separated (ms)");
  appc->add_option("--costs", app_opts.costs, "Seller costs, comma separated (ms)");
  appc->add_option("--tie", app_opts.tie, "Trade rule at v = c")->check(CLI::IsMember({"trade", "no-trade"}));
  appc->add_flag("--subsidy", app_opts.subsidy, "Compute the minimal subsidy (ms)");
  appc->add_option("--bidders", app_opts.bidders, "Bidders (revenue)");
  appc->add_option("--types", app_opts.types, "Type grids per agent, e.g. \"1,2;1,2\" (surplus)");
  appc->add_flag("--serial", app_opts.serial, "Use the serial kernels");

  std::string direction;
  std::uint64_t random_seed = 0;
  auto* epi = app.add_subcommand("epistemic", "Epistemic characterisation");
  epi->add_option("instance", instance_path, "Instance file")->required();
  epi->add_option("--direction", direction, "1to2 or 2to1")->required()->check(CLI::IsMember({"1to2", "2to1"}));
  auto* rs_opt = epi->add_option("--random-seed", random_seed, "Draw a random epistemic model (1to2)");
  concept_opts.attach(epi);

  std::string choice_mode = "wcc";
  std::size_t max_acts = 4;
  auto* choice = app.add_subcommand("choice", "Choice-based incentive checks");
  auto* inst_opt = choice->add_option("instance", instance_path, "Instance file");
  choice->add_option("--check", choice_mode, "ic, qic, iia or wcc")->check(CLI::IsMember({"ic", "qic", "iia", "wcc"}));
  bool corollary = false;
  choice->add_flag("--corollary", corollary, "Abstract-act sweep of CC and IIA implying IC");
  choice->add_option("--trials", trials, "Corollary trials");
  choice->add_option("--seed", seed, "Corollary seed");
  choice->add_option("--max-acts", max_acts, "Corollary universe size bound")->check(CLI::Range(1, 16));
  concept_opts.attach(choice);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    Report rep;
    rep.command = join_command(args);
    rep.verdict = Verdict::NotApplicable;
    add_error_block(rep, {{"usage-error", e.what(), ""}});
    out << rep.render();
    return kExitInput;
  }

  Report rep;
  rep.command = join_command(args);
  const std::string command = rep.command;
  try {
    if (*solve) {
      Loaded l = load(instance_path);
      rep.digest = l.digest;
      cmd_solve(rep, l.inst, concept_opts);
    } else if (*check) {
      Loaded l = load(instance_path);
      rep.digest = l.digest;
      cmd_check(rep, l.inst, property, concept_opts, command);
    } else if (*sweep) {
      rep.seed = seed;
      InstanceSizes sz = parse_sizes(sizes);
      if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
      cmd_sweep(rep, theorem, trials, seed, sz, first_trial, sweep_serial);
    } else if (*appc) {
      cmd_app(rep, app_opts, command);
    } else if (*epi) {
      Loaded l = load(instance_path);
      rep.digest = l.digest;
      std::optional<std::uint64_t> rs;
      if (rs_opt->count() > 0) {
        rs = random_seed;
        rep.seed = random_seed;
      }
      cmd_epistemic(rep, l.inst, direction, concept_opts, rs, command);
    } else if (*choice) {
      if (corollary) {
        rep.seed = seed;
        cmd_corollary(rep, trials, seed, max_acts);
      } else {
        if (inst_opt->count() == 0) throw InputError("missing-field", "choice needs an instance or --corollary", "instance");
        Loaded l = load(instance_path);
        rep.digest = l.digest;
        cmd_choice(rep, l.inst, choice_mode, concept_opts, command);
      }
    }
  } catch (const InputError& e) {
    add_error_block(rep, e.diagnostics());
    rep.verdict = Verdict::NotApplicable;
    out << rep.render();
    return kExitInput;
  } catch (const ResourceError& e) {
    add_error_block(rep, {{"resource-limit", e.what(), "MECHLAB_MAX_PROFILES"}});
    rep.verdict = Verdict::NotApplicable;
    out << rep.render();
    return kExitResource;
  } catch (const NotCheckable& e) {
    rep.block("not-checkable", {"reason"}).add({e.what()});
    rep.verdict = Verdict::NotApplicable;
    out << rep.render();
    return kExitPass;
  }
  out << rep.render();
  return rep.verdict == Verdict::Fail ? kExitFail : kExitPass;
}

CliOutcome run_captured(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliOutcome o;
  o.exit_code = run(args, out, err);
  o.report = out.str();
  o.errors = err.str();
  return o;
}

}  // namespace mechlab
