#include "mechlab/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mechlab {

using Json = nlohmann::ordered_json;

ChoiceCorrespondence ChoiceSpec::build(const Environment& env) const {
  if (expected_utility) return ChoiceCorrespondence::expected_utility(env, agent, type, universe);
  ChoiceCorrespondence c(agent, type, universe);
  for (const auto& [menu, chosen] : table) c.set(menu, chosen);
  return c;
}

Instance make_instance(Environment env, Mechanism mech) {
  Instance inst;
  inst.env = std::move(env);
  inst.mech = std::move(mech);
  return inst;
}

namespace {

void line_col(const std::string& text, std::size_t byte, int& line, int& col) {
  line = 1;
  col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
}

class Reader {
 public:
  std::vector<Diagnostic> diags;

  void error(std::string code, std::string message, std::string path) {
    diags.push_back({std::move(code), std::move(message), std::move(path)});
  }

  const Json* field(const Json& obj, const std::string& key, const std::string& path, bool required = true) {
    if (!obj.is_object()) {
      error("type-mismatch", "expected an object", path);
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error("missing-field", "missing field '" + key + "'", path);
      return nullptr;
    }
    return &*it;
  }

  std::optional<Rational> rational(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) {
      error("inexact-number", "write rationals as \"p/q\" strings", path);
      return std::nullopt;
    }
    if (!j.is_string()) {
      error("type-mismatch", "expected a rational string", path);
      return std::nullopt;
    }
    auto r = try_parse_rational(j.get<std::string>());
    if (!r) error("bad-rational", "malformed rational '" + j.get<std::string>() + "'", path);
    return r;
  }

  std::vector<std::string> labels(const Json& j, const std::string& path) {
    std::vector<std::string> out;
    if (!j.is_array()) {
      error("type-mismatch", "expected an array of labels", path);
      return out;
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_string()) error("type-mismatch", "labels must be strings", path + "[" + std::to_string(k) + "]");
      else out.push_back(j[k].get<std::string>());
    }
    return out;
  }

  std::vector<Rational> rationals(const Json& j, std::size_t expected, const std::string& path) {
    std::vector<Rational> out;
    if (!j.is_array()) {
      error("type-mismatch", "expected an array of rationals", path);
      return out;
    }
    if (j.size() != expected) {
      error("missing-table-cell", "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()), path);
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
      auto r = rational(j[k], path + "[" + std::to_string(k) + "]");
      out.push_back(r.value_or(Rational(0)));
    }
    return out;
  }

  std::optional<std::size_t> index_in(const std::vector<std::string>& set, const std::string& label,
                                      const std::string& path) {
    auto it = std::find(set.begin(), set.end(), label);
    if (it == set.end()) {
      error("unknown-label", "undeclared label '" + label + "'", path);
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - set.begin());
  }

  // A lottery is an outcome label (point mass) or an object {outcome: prob}.
  Lottery lottery(const Json& j, const std::vector<std::string>& outcomes, const std::string& path) {
    Lottery l{std::vector<Rational>(outcomes.size(), Rational(0))};
    if (j.is_string()) {
      if (auto a = index_in(outcomes, j.get<std::string>(), path)) l.prob[*a] = 1;
      return l;
    }
    if (!j.is_object()) {
      error("type-mismatch", "a lottery is an outcome label or an object", path);
      return l;
    }
    for (const auto& [key, val] : j.items()) {
      auto a = index_in(outcomes, key, path + "." + key);
      auto p = rational(val, path + "." + key);
      if (a && p) l.prob[*a] += *p;
    }
    return l;
  }

  MixedAction mixed(const Json& j, const std::vector<std::string>& actions, const std::string& path) {
    Lottery l = lottery(j, actions, path);
    return l.prob;
  }

  // Table keyed by comma-joined labels of a product set.
  template <class F>
  void keyed_table(const Json& j, const MixedRadix& radix, const std::vector<const std::vector<std::string>*>& labels,
                   const std::string& path, F&& cell) {
    if (!j.is_object()) {
      error("type-mismatch", "expected an object keyed by profile labels", path);
      return;
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < radix.size(); ++k) {
      auto d = radix.decode(k);
      std::string key;
      for (std::size_t x = 0; x < d.size(); ++x) key += (x ? "," : "") + (*labels[x])[d[x]];
      index[key] = k;
    }
    std::vector<bool> seen(radix.size(), false);
    for (const auto& [key, val] : j.items()) {
      auto it = index.find(key);
      if (it == index.end()) {
        error("unknown-label", "undeclared profile '" + key + "'", path);
        continue;
      }
      seen[it->second] = true;
      cell(it->second, val, path + "." + key);
    }
    for (const auto& [key, k] : index) {
      if (!seen[k]) error("missing-table-cell", "no entry for profile '" + key + "'", path);
    }
  }
};

std::string profile_key(const MixedRadix& radix, std::size_t k, const std::vector<const std::vector<std::string>*>& labels) {
  auto d = radix.decode(k);
  std::string key;
  for (std::size_t x = 0; x < d.size(); ++x) key += (x ? "," : "") + (*labels[x])[d[x]];
  return key;
}

std::vector<const std::vector<std::string>*> label_ptrs(const std::vector<std::vector<std::string>>& v) {
  std::vector<const std::vector<std::string>*> out;
  for (const auto& x : v) out.push_back(&x);
  return out;
}

void check_lottery(const Lottery& l, const std::string& path, std::vector<Diagnostic>& out) {
  bool neg = std::any_of(l.prob.begin(), l.prob.end(), [](const Rational& p) { return p < 0; });
  if (neg) out.push_back({"lottery-negative", "negative probability", path});
  if (sum(l.prob) != 1) out.push_back({"lottery-not-normalized", "lottery must sum to 1", path});
}

}  // namespace

Instance parse_instance_text(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    Diagnostic d{"syntax-error", e.what(), source};
    line_col(text, e.byte == 0 ? 0 : e.byte - 1, d.line, d.column);
    throw InputError(std::vector<Diagnostic>{d});
  }

  Reader rd;
  Instance inst;
  Environment& env = inst.env;
  if (!root.is_object()) {
    rd.error("type-mismatch", "instance must be a JSON object", "");
    throw InputError(rd.diags);
  }

  if (const Json* agents = rd.field(root, "agents", "")) {
    if (!agents->is_array()) rd.error("type-mismatch", "agents must be an array", "agents");
    else {
      for (std::size_t k = 0; k < agents->size(); ++k) {
        std::string path = "agents[" + std::to_string(k) + "]";
        const Json& a = (*agents)[k];
        const Json* name = rd.field(a, "name", path);
        const Json* types = rd.field(a, "types", path);
        if (!name || !types) continue;
        if (!name->is_string()) {
          rd.error("type-mismatch", "agent name must be a string", path + ".name");
          continue;
        }
        env.agents.push_back(name->get<std::string>());
        env.types.push_back(rd.labels(*types, path + ".types"));
      }
    }
  }
  if (const Json* outs = rd.field(root, "outcomes", "")) env.outcomes = rd.labels(*outs, "outcomes");
  if (!rd.diags.empty()) throw InputError(rd.diags);

  const std::size_t I = env.num_agents();
  MixedRadix ts = env.type_space();

  const Json* beliefs = rd.field(root, "beliefs", "", false);
  const Json* prior = rd.field(root, "prior", "", false);
  if (beliefs && prior) rd.error("conflicting-fields", "give either beliefs or prior", "");
  if (!beliefs && !prior) rd.error("missing-field", "missing field 'beliefs' (or 'prior')", "");
  if (prior && !beliefs) {
    auto p = rd.rationals(*prior, ts.size(), "prior");
    bool ok = p.size() == ts.size() && std::all_of(p.begin(), p.end(), [](const Rational& x) { return x > 0; });
    if (!ok) rd.error("belief-not-positive", "prior must have full support", "prior");
    else if (sum(p) != 1) rd.error("belief-not-normalized", "prior sums to " + to_string(sum(p)), "prior");
    else env.beliefs = Environment::beliefs_from_prior(env.types, p);
  }
  if (beliefs) {
    env.beliefs.resize(I);
    for (std::size_t i = 0; i < I; ++i) {
      std::string path = "beliefs." + env.agents[i];
      const Json* rows = rd.field(*beliefs, env.agents[i], "beliefs");
      if (!rows) continue;
      const std::size_t opp = ts.without(i).size();
      for (std::size_t t = 0; t < env.num_types(i); ++t) {
        const Json* row = rd.field(*rows, env.types[i][t], path);
        env.beliefs[i].push_back(row ? rd.rationals(*row, opp, path + "." + env.types[i][t])
                                     : std::vector<Rational>(opp, Rational(0)));
      }
    }
  }

  env.utility.assign(I, std::vector<std::vector<Rational>>(env.num_outcomes(), std::vector<Rational>(ts.size())));
  if (const Json* util = rd.field(root, "utility", "")) {
    for (std::size_t i = 0; i < I; ++i) {
      std::string path = "utility." + env.agents[i];
      const Json* table = rd.field(*util, env.agents[i], "utility");
      if (!table) continue;
      for (std::size_t a = 0; a < env.num_outcomes(); ++a) {
        const Json* row = rd.field(*table, env.outcomes[a], path);
        if (row) env.utility[i][a] = rd.rationals(*row, ts.size(), path + "." + env.outcomes[a]);
      }
    }
  }
  std::size_t before_env = rd.diags.size();
  if (before_env == 0) {
    for (auto& d : env.validate()) rd.diags.push_back(d);
  }
  if (!rd.diags.empty()) throw InputError(rd.diags);

  if (const Json* mj = rd.field(root, "mechanism", "", false)) {
    Mechanism mech;
    mech.actions.resize(I);
    if (const Json* acts = rd.field(*mj, "actions", "mechanism")) {
      for (std::size_t i = 0; i < I; ++i) {
        if (const Json* a = rd.field(*acts, env.agents[i], "mechanism.actions")) {
          mech.actions[i] = rd.labels(*a, "mechanism.actions." + env.agents[i]);
        }
      }
    }
    bool shaped = std::all_of(mech.actions.begin(), mech.actions.end(), [](const auto& a) { return !a.empty(); });
    if (shaped) {
      MixedRadix as = mech.action_space();
      mech.outcome.assign(as.size(), Lottery{std::vector<Rational>(env.num_outcomes(), Rational(0))});
      if (const Json* table = rd.field(*mj, "outcome", "mechanism")) {
        rd.keyed_table(*table, as, label_ptrs(mech.actions), "mechanism.outcome",
                       [&](std::size_t s, const Json& v, const std::string& p) {
                         mech.outcome[s] = rd.lottery(v, env.outcomes, p);
                       });
      }
      if (rd.diags.empty()) {
        for (auto& d : mech.validate(env)) rd.diags.push_back(d);
      }
    } else {
      rd.error("no-actions", "every agent needs at least one action", "mechanism.actions");
    }
    inst.mech = std::move(mech);
  }

  auto read_scf = [&](const Json& j, const std::string& path) {
    SCF f;
    if (const Json* name = rd.field(j, "name", path, false)) {
      if (name->is_string()) f.name = name->get<std::string>();
      else rd.error("type-mismatch", "name must be a string", path + ".name");
    }
    f.value.assign(ts.size(), Lottery{std::vector<Rational>(env.num_outcomes(), Rational(0))});
    if (const Json* v = rd.field(j, "value", path)) {
      rd.keyed_table(*v, ts, label_ptrs(env.types), path + ".value",
                     [&](std::size_t t, const Json& cell, const std::string& p) {
                       f.value[t] = rd.lottery(cell, env.outcomes, p);
                       check_lottery(f.value[t], p, rd.diags);
                     });
    }
    return f;
  };
  if (const Json* scf = rd.field(root, "scf", "", false)) {
    inst.scfs.push_back(read_scf(*scf, "scf"));
    inst.has_scf = true;
  }
  if (const Json* scs = rd.field(root, "scs", "", false)) {
    if (!scs->is_array()) rd.error("type-mismatch", "scs must be an array", "scs");
    else {
      for (std::size_t k = 0; k < scs->size(); ++k) inst.scfs.push_back(read_scf((*scs)[k], "scs[" + std::to_string(k) + "]"));
    }
  }

  if (const Json* cfg = rd.field(root, "config", "", false)) {
    EngineSettings& st = inst.settings;
    if (const Json* k = rd.field(*cfg, "k_max", "config", false)) {
      if (k->is_number_unsigned() && k->get<std::size_t>() >= 1) st.k_max = k->get<std::size_t>();
      else rd.error("bad-config", "k_max must be a positive integer", "config.k_max");
    }
    if (const Json* chi = rd.field(*cfg, "chi", "config", false)) {
      st.chi = rd.rational(*chi, "config.chi");
      if (st.chi && (*st.chi < 0 || *st.chi > 1)) rd.error("bad-config", "chi must lie in [0, 1]", "config.chi");
    }
    if (const Json* an = rd.field(*cfg, "anchor", "config", false)) {
      AnchorSpec spec;
      if (an->is_string() && an->get<std::string>() == "uniform") spec.kind = AnchorKind::Uniform;
      else if (an->is_string() && an->get<std::string>() == "truthful") spec.kind = AnchorKind::TruthfulLabel;
      else if (an->is_object() && inst.mech) {
        spec.kind = AnchorKind::Custom;
        spec.custom.resize(I);
        for (std::size_t i = 0; i < I; ++i) {
          const Json* per = rd.field(*an, env.agents[i], "config.anchor");
          for (std::size_t t = 0; t < env.num_types(i); ++t) {
            const Json* m = per ? rd.field(*per, env.types[i][t], "config.anchor." + env.agents[i]) : nullptr;
            std::string p = "config.anchor." + env.agents[i] + "." + env.types[i][t];
            spec.custom[i].push_back(m ? rd.mixed(*m, inst.mech->actions[i], p)
                                       : MixedAction(inst.mech->num_actions(i), Rational(0)));
          }
        }
      } else {
        rd.error("bad-config", "anchor must be \"uniform\", \"truthful\" or a per-type table", "config.anchor");
      }
      st.anchor = spec;
    }
    if (const Json* de = rd.field(*cfg, "delta", "config", false)) {
      if (!inst.mech) rd.error("bad-config", "delta needs a mechanism", "config.delta");
      else {
        std::vector<std::vector<std::size_t>> allowed(I);
        for (std::size_t j = 0; j < I; ++j) {
          const Json* a = rd.field(*de, env.agents[j], "config.delta");
          if (!a) continue;
          for (const auto& lab : rd.labels(*a, "config.delta." + env.agents[j])) {
            if (auto x = rd.index_in(inst.mech->actions[j], lab, "config.delta." + env.agents[j])) allowed[j].push_back(*x);
          }
          std::sort(allowed[j].begin(), allowed[j].end());
        }
        st.delta_actions = allowed;
      }
    }
  }

  if (const Json* ep = rd.field(root, "epistemic", "", false)) {
    if (!inst.mech) {
      rd.error("missing-field", "epistemic section needs a mechanism", "epistemic");
    } else {
      EpistemicModel m;
      m.phi.resize(I);
      m.eta.resize(I);
      m.tau.resize(I);
      inst.epistemic_names.assign(I, {});
      std::vector<const Json*> per(I, nullptr);
      for (std::size_t i = 0; i < I; ++i) {
        per[i] = rd.field(*ep, env.agents[i], "epistemic");
        if (!per[i]) continue;
        if (!per[i]->is_array()) {
          rd.error("type-mismatch", "expected an array of epistemic types", "epistemic." + env.agents[i]);
          per[i] = nullptr;
          continue;
        }
        for (std::size_t h = 0; h < per[i]->size(); ++h) {
          std::string p = "epistemic." + env.agents[i] + "[" + std::to_string(h) + "]";
          const Json& e = (*per[i])[h];
          const Json* name = rd.field(e, "name", p);
          inst.epistemic_names[i].push_back(name && name->is_string() ? name->get<std::string>() : "");
          const Json* tau = rd.field(e, "tau", p);
          std::size_t t = 0;
          if (tau && tau->is_string()) {
            t = rd.index_in(env.types[i], tau->get<std::string>(), p + ".tau").value_or(0);
          } else if (tau) {
            rd.error("type-mismatch", "tau must be a type label", p + ".tau");
          }
          m.tau[i].push_back(t);
          const Json* eta = rd.field(e, "eta", p);
          m.eta[i].push_back(eta ? rd.mixed(*eta, inst.mech->actions[i], p + ".eta")
                                 : MixedAction(inst.mech->num_actions(i), Rational(0)));
        }
      }
      MixedRadix states = m.state_space();
      for (std::size_t i = 0; i < I; ++i) {
        if (!per[i]) continue;
        MixedRadix opp = states.without(i);
        for (std::size_t h = 0; h < per[i]->size(); ++h) {
          std::string p = "epistemic." + env.agents[i] + "[" + std::to_string(h) + "].phi";
          std::vector<Dist::Entry> entries;
          const Json* phi = rd.field((*per[i])[h], "phi", p.substr(0, p.size() - 4));
          if (phi && !phi->is_array()) rd.error("type-mismatch", "phi must be an array", p);
          if (phi && phi->is_array()) {
            for (std::size_t k = 0; k < phi->size(); ++k) {
              std::string q = p + "[" + std::to_string(k) + "]";
              const Json* ops = rd.field((*phi)[k], "opponents", q);
              const Json* pr = rd.field((*phi)[k], "p", q);
              if (!ops || !pr) continue;
              std::vector<std::size_t> digits;
              bool ok = true;
              for (std::size_t j = 0; j < I; ++j) {
                if (j == i) continue;
                const Json* hn = rd.field(*ops, env.agents[j], q + ".opponents");
                if (!hn || !hn->is_string()) {
                  ok = false;
                  continue;
                }
                auto x = rd.index_in(inst.epistemic_names[j], hn->get<std::string>(), q + ".opponents." + env.agents[j]);
                if (!x) ok = false;
                digits.push_back(x.value_or(0));
              }
              auto prob = rd.rational(*pr, q + ".p");
              if (ok && prob) entries.emplace_back(opp.encode(digits), *prob);
            }
          }
          m.phi[i].push_back(Dist::from_entries(std::move(entries)));
        }
      }
      if (rd.diags.empty()) {
        for (auto& d : m.validate(env, *inst.mech)) rd.diags.push_back(d);
      }
      inst.epistemic = std::move(m);
    }
  }

  if (const Json* ch = rd.field(root, "choice", "", false)) {
    if (!ch->is_array()) rd.error("type-mismatch", "choice must be an array", "choice");
    else {
      for (std::size_t k = 0; k < ch->size(); ++k) {
        std::string p = "choice[" + std::to_string(k) + "]";
        const Json& c = (*ch)[k];
        ChoiceSpec spec;
        const Json* agent = rd.field(c, "agent", p);
        const Json* type = rd.field(c, "type", p);
        const Json* rule = rd.field(c, "rule", p);
        const Json* uni = rd.field(c, "universe", p);
        if (!agent || !type || !rule || !uni || !agent->is_string() || !type->is_string() || !rule->is_string()) {
          rd.error("bad-choice", "choice entries need agent, type, rule and universe", p);
          continue;
        }
        auto i = rd.index_in(env.agents, agent->get<std::string>(), p + ".agent");
        if (!i) continue;
        auto t = rd.index_in(env.types[*i], type->get<std::string>(), p + ".type");
        if (!t) continue;
        spec.agent = *i;
        spec.type = *t;
        const std::string r = rule->get<std::string>();
        if (r != "expected-utility" && r != "table") rd.error("bad-choice", "rule is \"expected-utility\" or \"table\"", p + ".rule");
        spec.expected_utility = r == "expected-utility";
        const std::size_t nk = ts.without(*i).size();
        if (!uni->is_array()) rd.error("type-mismatch", "universe must be an array of acts", p + ".universe");
        else if (uni->size() > kMaxUniverse) rd.error("universe-too-large", "at most 16 acts", p + ".universe");
        else {
          for (std::size_t x = 0; x < uni->size(); ++x) {
            std::string q = p + ".universe[" + std::to_string(x) + "]";
            const Json& act = (*uni)[x];
            IAAct a;
            if (!act.is_array() || act.size() != nk) {
              rd.error("missing-table-cell", "an act needs one lottery per opponent type profile", q);
            } else {
              for (std::size_t y = 0; y < nk; ++y) {
                a.push_back(rd.lottery(act[y], env.outcomes, q + "[" + std::to_string(y) + "]"));
                check_lottery(a.back(), q + "[" + std::to_string(y) + "]", rd.diags);
              }
            }
            spec.universe.push_back(std::move(a));
          }
        }
        auto as_menu = [&](const Json& j, const std::string& q) -> Menu {
          Menu m = 0;
          if (!j.is_array()) {
            rd.error("type-mismatch", "a menu is an array of act indices", q);
            return 0;
          }
          for (const auto& x : j) {
            if (!x.is_number_unsigned() || x.get<std::size_t>() >= spec.universe.size()) {
              rd.error("undeclared-act", "act index outside the universe", q);
            } else {
              m |= Menu{1} << x.get<std::size_t>();
            }
          }
          return m;
        };
        if (const Json* tab = rd.field(c, "table", p, false)) {
          if (!tab->is_array()) rd.error("type-mismatch", "table must be an array", p + ".table");
          else {
            for (std::size_t x = 0; x < tab->size(); ++x) {
              std::string q = p + ".table[" + std::to_string(x) + "]";
              const Json* menu = rd.field((*tab)[x], "menu", q);
              const Json* chosen = rd.field((*tab)[x], "chosen", q);
              if (menu && chosen) spec.table.emplace_back(as_menu(*menu, q + ".menu"), as_menu(*chosen, q + ".chosen"));
            }
          }
        }
        if (rd.diags.empty() && !spec.expected_utility) {
          for (auto& d : spec.build(env).validate()) {
            d.path = p + (d.path.empty() ? "" : "." + d.path);
            rd.diags.push_back(d);
          }
        }
        inst.choice.push_back(std::move(spec));
      }
    }
  }

  if (!rd.diags.empty()) throw InputError(rd.diags);
  return inst;
}

Instance parse_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file-not-found", "cannot open '" + path + "'", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str(), path);
}

namespace {

Json lottery_json(const Lottery& l, const std::vector<std::string>& outcomes) {
  for (std::size_t a = 0; a < l.prob.size(); ++a) {
    if (l.prob[a] == 1) return outcomes[a];
  }
  Json o = Json::object();
  for (std::size_t a = 0; a < l.prob.size(); ++a) {
    if (l.prob[a] != 0) o[outcomes[a]] = to_string(l.prob[a]);
  }
  return o;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json menu_json(Menu m) {
  Json a = Json::array();
  for (std::size_t k = 0; k < kMaxUniverse; ++k) {
    if (m & (Menu{1} << k)) a.push_back(k);
  }
  return a;
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  const Environment& env = inst.env;
  MixedRadix ts = env.type_space();
  Json root = Json::object();
  Json agents = Json::array();
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    agents.push_back({{"name", env.agents[i]}, {"types", env.types[i]}});
  }
  root["agents"] = agents;
  root["outcomes"] = env.outcomes;
  Json beliefs = Json::object();
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    Json rows = Json::object();
    for (std::size_t t = 0; t < env.num_types(i); ++t) rows[env.types[i][t]] = rationals_json(env.beliefs[i][t]);
    beliefs[env.agents[i]] = rows;
  }
  root["beliefs"] = beliefs;
  Json util = Json::object();
  for (std::size_t i = 0; i < env.num_agents(); ++i) {
    Json rows = Json::object();
    for (std::size_t a = 0; a < env.num_outcomes(); ++a) rows[env.outcomes[a]] = rationals_json(env.utility[i][a]);
    util[env.agents[i]] = rows;
  }
  root["utility"] = util;

  if (inst.mech) {
    const Mechanism& mech = *inst.mech;
    Json acts = Json::object();
    for (std::size_t i = 0; i < env.num_agents(); ++i) acts[env.agents[i]] = mech.actions[i];
    Json table = Json::object();
    MixedRadix as = mech.action_space();
    for (std::size_t s = 0; s < as.size(); ++s) {
      table[profile_key(as, s, label_ptrs(mech.actions))] = lottery_json(mech.outcome[s], env.outcomes);
    }
    root["mechanism"] = {{"actions", acts}, {"outcome", table}};
  }

  auto scf_json = [&](const SCF& f) {
    Json v = Json::object();
    for (std::size_t t = 0; t < ts.size(); ++t) v[profile_key(ts, t, label_ptrs(env.types))] = lottery_json(f.value[t], env.outcomes);
    return Json{{"name", f.name}, {"value", v}};
  };
  std::size_t first = 0;
  if (inst.has_scf && !inst.scfs.empty()) {
    root["scf"] = scf_json(inst.scfs[0]);
    first = 1;
  }
  if (inst.scfs.size() > first) {
    Json scs = Json::array();
    for (std::size_t k = first; k < inst.scfs.size(); ++k) scs.push_back(scf_json(inst.scfs[k]));
    root["scs"] = scs;
  }

  const EngineSettings& st = inst.settings;
  if (st.k_max || st.anchor || st.chi || st.delta_actions) {
    Json cfg = Json::object();
    if (st.k_max) cfg["k_max"] = *st.k_max;
    if (st.anchor) {
      if (st.anchor->kind == AnchorKind::Uniform) cfg["anchor"] = "uniform";
      else if (st.anchor->kind == AnchorKind::TruthfulLabel) cfg["anchor"] = "truthful";
      else {
        Json an = Json::object();
        for (std::size_t i = 0; i < env.num_agents(); ++i) {
          Json per = Json::object();
          for (std::size_t t = 0; t < env.num_types(i); ++t) {
            per[env.types[i][t]] = lottery_json(Lottery{st.anchor->custom[i][t]}, inst.mech->actions[i]);
          }
          an[env.agents[i]] = per;
        }
        cfg["anchor"] = an;
      }
    }
    if (st.chi) cfg["chi"] = to_string(*st.chi);
    if (st.delta_actions) {
      Json de = Json::object();
      for (std::size_t j = 0; j < env.num_agents(); ++j) {
        Json a = Json::array();
        for (std::size_t x : (*st.delta_actions)[j]) a.push_back(inst.mech->actions[j][x]);
        de[env.agents[j]] = a;
      }
      cfg["delta"] = de;
    }
    root["config"] = cfg;
  }

  if (inst.epistemic) {
    const EpistemicModel& m = *inst.epistemic;
    MixedRadix states = m.state_space();
    Json ep = Json::object();
    for (std::size_t i = 0; i < env.num_agents(); ++i) {
      Json list = Json::array();
      MixedRadix opp = states.without(i);
      for (std::size_t h = 0; h < m.num_epistemic_types(i); ++h) {
        Json phi = Json::array();
        for (const auto& [k, p] : m.phi[i][h].entries()) {
          auto d = opp.decode(k);
          Json ops = Json::object();
          std::size_t pos = 0;
          for (std::size_t j = 0; j < env.num_agents(); ++j) {
            if (j != i) ops[env.agents[j]] = inst.epistemic_names[j][d[pos++]];
          }
          phi.push_back({{"opponents", ops}, {"p", to_string(p)}});
        }
        list.push_back({{"name", inst.epistemic_names[i][h]},
                        {"tau", env.types[i][m.tau[i][h]]},
                        {"eta", lottery_json(Lottery{m.eta[i][h]}, inst.mech->actions[i])},
                        {"phi", phi}});
      }
      ep[env.agents[i]] = list;
    }
    root["epistemic"] = ep;
  }

  if (!inst.choice.empty()) {
    Json ch = Json::array();
    for (const auto& c : inst.choice) {
      Json uni = Json::array();
      for (const auto& act : c.universe) {
        Json a = Json::array();
        for (const auto& l : act) a.push_back(lottery_json(l, env.outcomes));
        uni.push_back(a);
      }
      Json e = {{"agent", env.agents[c.agent]},
                {"type", env.types[c.agent][c.type]},
                {"rule", c.expected_utility ? "expected-utility" : "table"},
                {"universe", uni}};
      if (!c.table.empty()) {
        Json tab = Json::array();
        for (const auto& [menu, chosen] : c.table) tab.push_back({{"menu", menu_json(menu)}, {"chosen", menu_json(chosen)}});
        e["table"] = tab;
      }
      ch.push_back(e);
    }
    root["choice"] = ch;
  }
  return root.dump(2) + "\n";
}

namespace {

bool same_env(const Environment& a, const Environment& b) {
  return a.agents == b.agents && a.types == b.types && a.outcomes == b.outcomes && a.beliefs == b.beliefs &&
         a.utility == b.utility;
}

bool same_anchor(const std::optional<AnchorSpec>& a, const std::optional<AnchorSpec>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->kind == b->kind && a->custom == b->custom;
}

}  // namespace

bool same_instance(const Instance& a, const Instance& b) {
  if (!same_env(a.env, b.env)) return false;
  if (a.mech.has_value() != b.mech.has_value()) return false;
  if (a.mech && (a.mech->actions != b.mech->actions || a.mech->outcome != b.mech->outcome)) return false;
  if (a.has_scf != b.has_scf || a.scfs.size() != b.scfs.size()) return false;
  for (std::size_t k = 0; k < a.scfs.size(); ++k) {
    if (a.scfs[k].name != b.scfs[k].name || !(a.scfs[k] == b.scfs[k])) return false;
  }
  if (a.epistemic.has_value() != b.epistemic.has_value()) return false;
  if (a.epistemic) {
    const auto& x = *a.epistemic;
    const auto& y = *b.epistemic;
    if (x.phi != y.phi || x.eta != y.eta || x.tau != y.tau || a.epistemic_names != b.epistemic_names) return false;
  }
  if (a.choice != b.choice) return false;
  const auto& s = a.settings;
  const auto& t = b.settings;
  return s.k_max == t.k_max && s.chi == t.chi && s.delta_actions == t.delta_actions && same_anchor(s.anchor, t.anchor);
}

}  // namespace mechlab
