#include "mechlab/game.hpp"

#include <set>
#include <stdexcept>

namespace mechlab {

MixedRadix::MixedRadix(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
  strides_.assign(radices_.size(), 1);
  size_ = 1;
  for (std::size_t d = radices_.size(); d-- > 0;) {
    strides_[d] = size_;
    if (radices_[d] != 0 && size_ > SIZE_MAX / radices_[d]) {
      throw std::overflow_error("mixed-radix space too large");
    }
    size_ *= radices_[d];
  }
}

std::size_t MixedRadix::encode(const std::vector<std::size_t>& digits) const {
  std::size_t idx = 0;
  for (std::size_t d = 0; d < radices_.size(); ++d) idx += digits[d] * strides_[d];
  return idx;
}

std::vector<std::size_t> MixedRadix::decode(std::size_t index) const {
  std::vector<std::size_t> digits(radices_.size());
  for (std::size_t d = 0; d < radices_.size(); ++d) digits[d] = digit(index, d);
  return digits;
}

MixedRadix MixedRadix::without(std::size_t dim) const {
  std::vector<std::size_t> r;
  r.reserve(radices_.size());
  for (std::size_t d = 0; d < radices_.size(); ++d) {
    if (d != dim) r.push_back(radices_[d]);
  }
  return MixedRadix(std::move(r));
}

std::size_t MixedRadix::project_out(std::size_t index, std::size_t dim) const {
  std::size_t rest = 0;
  for (std::size_t d = 0; d < radices_.size(); ++d) {
    if (d == dim) continue;
    rest = rest * radices_[d] + digit(index, d);
  }
  return rest;
}

std::size_t MixedRadix::merge(std::size_t dim, std::size_t own, std::size_t rest) const {
  std::size_t idx = 0;
  for (std::size_t d = radices_.size(); d-- > 0;) {
    if (d == dim) {
      idx += own * strides_[d];
    } else {
      idx += (rest % radices_[d]) * strides_[d];
      rest /= radices_[d];
    }
  }
  return idx;
}

MixedRadix Environment::type_space() const {
  std::vector<std::size_t> r;
  for (const auto& t : types) r.push_back(t.size());
  return MixedRadix(std::move(r));
}

std::vector<Diagnostic> Environment::validate() const {
  std::vector<Diagnostic> out;
  auto add = [&](std::string code, std::string msg, std::string path) {
    out.push_back({std::move(code), std::move(msg), std::move(path)});
  };
  if (agents.empty()) add("no-agents", "at least one agent is required", "agents");
  if (types.size() != agents.size()) {
    add("types-shape", "one type list per agent is required", "types");
    return out;
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (types[i].empty()) add("no-types", "agent has no types", "types." + agents[i]);
    std::set<std::string> seen(types[i].begin(), types[i].end());
    if (seen.size() != types[i].size()) add("duplicate-label", "duplicate type label", "types." + agents[i]);
  }
  {
    std::set<std::string> seen(agents.begin(), agents.end());
    if (seen.size() != agents.size()) add("duplicate-label", "duplicate agent label", "agents");
  }
  if (outcomes.empty()) add("no-outcomes", "outcome set is empty", "outcomes");
  if (!out.empty()) return out;

  MixedRadix ts = type_space();
  if (beliefs.size() != agents.size()) {
    add("beliefs-shape", "one belief table per agent is required", "beliefs");
  } else {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      std::size_t opp = ts.without(i).size();
      if (beliefs[i].size() != types[i].size()) {
        add("beliefs-shape", "one belief row per type is required", "beliefs." + agents[i]);
        continue;
      }
      for (std::size_t ti = 0; ti < types[i].size(); ++ti) {
        std::string path = "beliefs." + agents[i] + "." + types[i][ti];
        const auto& row = beliefs[i][ti];
        if (row.size() != opp) {
          add("beliefs-shape", "expected " + std::to_string(opp) + " entries", path);
          continue;
        }
        bool positive = true;
        for (const auto& p : row) positive = positive && p > 0;
        if (!positive) add("belief-not-positive", "beliefs must have full support", path);
        Rational s = sum(row);
        if (s != 1) add("belief-not-normalized", "row sums to " + to_string(s), path);
      }
    }
  }
  if (utility.size() != agents.size()) {
    add("utility-shape", "one utility table per agent is required", "utility");
  } else {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (utility[i].size() != outcomes.size()) {
        add("utility-shape", "one row per outcome is required", "utility." + agents[i]);
        continue;
      }
      for (std::size_t a = 0; a < outcomes.size(); ++a) {
        if (utility[i][a].size() != ts.size()) {
          add("utility-shape", "expected " + std::to_string(ts.size()) + " entries",
              "utility." + agents[i] + "." + outcomes[a]);
        }
      }
    }
  }
  return out;
}

void Environment::require_valid() const {
  auto ds = validate();
  if (!ds.empty()) throw InputError(std::move(ds));
}

std::vector<std::vector<std::vector<Rational>>> Environment::beliefs_from_prior(
    const std::vector<std::vector<std::string>>& types, const std::vector<Rational>& prior) {
  std::vector<std::size_t> r;
  for (const auto& t : types) r.push_back(t.size());
  MixedRadix ts(r);
  if (prior.size() != ts.size()) {
    throw InputError("prior-shape", "prior must have one entry per type profile", "prior");
  }
  std::vector<std::vector<std::vector<Rational>>> b(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    MixedRadix opp = ts.without(i);
    b[i].assign(types[i].size(), std::vector<Rational>(opp.size(), Rational(0)));
    for (std::size_t t = 0; t < ts.size(); ++t) {
      b[i][ts.digit(t, i)][ts.project_out(t, i)] = prior[t];
    }
    for (auto& row : b[i]) {
      Rational s = sum(row);
      if (s == 0) throw InputError("prior-zero-marginal", "type has zero prior mass", "prior");
      for (auto& p : row) p /= s;
    }
  }
  return b;
}

Lottery Lottery::point(std::size_t outcome, std::size_t num_outcomes) {
  Lottery l;
  l.prob.assign(num_outcomes, Rational(0));
  l.prob.at(outcome) = 1;
  return l;
}

std::string describe(const Lottery& l, const std::vector<std::string>& outcome_labels) {
  return describe(Dist::from_dense(l.prob), outcome_labels);
}

MixedRadix Mechanism::action_space() const {
  std::vector<std::size_t> r;
  for (const auto& a : actions) r.push_back(a.size());
  return MixedRadix(std::move(r));
}

std::vector<Diagnostic> Mechanism::validate(const Environment& env) const {
  std::vector<Diagnostic> out;
  if (actions.size() != env.num_agents()) {
    out.push_back({"actions-shape", "one action list per agent is required", "mechanism.actions"});
    return out;
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].empty()) {
      out.push_back({"no-actions", "agent has no actions", "mechanism.actions." + env.agents[i]});
    }
    std::set<std::string> seen(actions[i].begin(), actions[i].end());
    if (seen.size() != actions[i].size()) {
      out.push_back({"duplicate-label", "duplicate action label", "mechanism.actions." + env.agents[i]});
    }
  }
  if (!out.empty()) return out;
  MixedRadix as = action_space();
  if (outcome.size() != as.size()) {
    out.push_back({"outcome-shape", "expected " + std::to_string(as.size()) + " action profiles",
                   "mechanism.outcome"});
    return out;
  }
  for (std::size_t s = 0; s < outcome.size(); ++s) {
    std::string path = "mechanism.outcome[" + std::to_string(s) + "]";
    const auto& l = outcome[s];
    if (l.prob.size() != env.num_outcomes()) {
      out.push_back({"lottery-shape", "lottery must cover every outcome", path});
      continue;
    }
    bool nonneg = true;
    for (const auto& p : l.prob) nonneg = nonneg && p >= 0;
    if (!nonneg) out.push_back({"lottery-negative", "negative probability", path});
    if (sum(l.prob) != 1) out.push_back({"lottery-not-normalized", "lottery must sum to 1", path});
  }
  return out;
}

void Mechanism::require_valid(const Environment& env) const {
  auto ds = validate(env);
  if (!ds.empty()) throw InputError(std::move(ds));
}

MixedAction pure_action(std::size_t a, std::size_t num_actions) {
  MixedAction m(num_actions, Rational(0));
  m.at(a) = 1;
  return m;
}

StrategyProfile make_product_profile(const Environment& env, const Mechanism& mech,
                                     std::vector<std::vector<MixedAction>> marginals) {
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  std::size_t n = env.num_agents();
  StrategyProfile sp;
  sp.play.reserve(ts.size());
  for (std::size_t t = 0; t < ts.size(); ++t) {
    // Product of per-agent marginals, accumulated dimension by dimension.
    std::vector<Dist::Entry> cur{{0, Rational(1)}};
    for (std::size_t i = 0; i < n; ++i) {
      const MixedAction& m = marginals.at(i).at(ts.digit(t, i));
      std::vector<Dist::Entry> next;
      for (const auto& [idx, p] : cur) {
        for (std::size_t a = 0; a < m.size(); ++a) {
          if (m[a] == 0) continue;
          next.emplace_back(idx * as.radices()[i] + a, p * m[a]);
        }
      }
      cur = std::move(next);
    }
    sp.play.push_back(Dist::from_entries(std::move(cur)));
  }
  sp.product_form = true;
  sp.marginals = std::move(marginals);
  return sp;
}

StrategyProfile make_pure_profile(const Environment& env, const Mechanism& mech,
                                  std::vector<PureStrategy> actions) {
  std::vector<std::vector<MixedAction>> m(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t a : actions[i]) m[i].push_back(pure_action(a, mech.num_actions(i)));
  }
  StrategyProfile sp = make_product_profile(env, mech, std::move(m));
  sp.pure = std::move(actions);
  return sp;
}

StrategyProfile make_joint_profile(std::vector<Dist> play) {
  StrategyProfile sp;
  sp.play = std::move(play);
  return sp;
}

Expectation conjecture_from_profile(const Environment& env, const Mechanism& mech,
                                    const StrategyProfile& sigma, std::size_t i, std::size_t t_i) {
  MixedRadix ts = env.type_space();
  MixedRadix as = mech.action_space();
  MixedRadix opp_t = ts.without(i);
  Expectation e{i, t_i, {}};
  e.conjecture.reserve(opp_t.size());
  for (std::size_t k = 0; k < opp_t.size(); ++k) {
    std::size_t t = ts.merge(i, t_i, k);
    std::vector<Dist::Entry> entries;
    for (const auto& [s, p] : sigma.play[t].entries()) entries.emplace_back(as.project_out(s, i), p);
    e.conjecture.push_back(Dist::from_entries(std::move(entries)));
  }
  return e;
}

bool SolutionSet::has_full_provenance() const {
  if (provenance.size() != profiles.size()) return false;
  for (const auto& p : provenance) {
    if (!p) return false;
  }
  return true;
}

namespace {

std::string join_labels(const MixedRadix& r, std::size_t idx,
                        const std::vector<const std::vector<std::string>*>& labels) {
  std::string out;
  auto digits = r.decode(idx);
  for (std::size_t d = 0; d < digits.size(); ++d) {
    if (d) out += ',';
    out += (*labels[d])[digits[d]];
  }
  return out;
}

}  // namespace

std::string opponent_action_label(const Mechanism& mech, std::size_t i, std::size_t s_minus_i) {
  std::vector<const std::vector<std::string>*> labels;
  for (std::size_t j = 0; j < mech.actions.size(); ++j) {
    if (j != i) labels.push_back(&mech.actions[j]);
  }
  return join_labels(mech.action_space().without(i), s_minus_i, labels);
}

std::string opponent_type_label(const Environment& env, std::size_t i, std::size_t t_minus_i) {
  std::vector<const std::vector<std::string>*> labels;
  for (std::size_t j = 0; j < env.types.size(); ++j) {
    if (j != i) labels.push_back(&env.types[j]);
  }
  return join_labels(env.type_space().without(i), t_minus_i, labels);
}

std::string action_profile_label(const Mechanism& mech, std::size_t s) {
  std::vector<const std::vector<std::string>*> labels;
  for (const auto& a : mech.actions) labels.push_back(&a);
  return join_labels(mech.action_space(), s, labels);
}

std::string type_profile_label(const Environment& env, std::size_t t) {
  std::vector<const std::vector<std::string>*> labels;
  for (const auto& a : env.types) labels.push_back(&a);
  return join_labels(env.type_space(), t, labels);
}

}  // namespace mechlab
