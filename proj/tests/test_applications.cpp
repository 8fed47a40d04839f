#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mechlab/applications.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/random.hpp"
#include "oracles.hpp"

using namespace mechlab;

namespace {

Rational frac(unsigned long p, unsigned long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::vector<Rational> random_mass(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> mass(n);
  Rational total = 0;
  for (auto& m : mass) {
    m = static_cast<unsigned long>(uniform_below(rng, 4));
    total += m;
  }
  if (total == 0) {
    mass[uniform_below(rng, n)] = 1;
    total = 1;
  }
  for (auto& m : mass) m /= total;
  return mass;
}

// The grid auction as a generic two-agent game: outcomes are "no trade" and
// one trade outcome per distinct price.
struct EncodedAuction {
  Environment env;
  Mechanism mech;
};

EncodedAuction encode_grid_auction(std::size_t n, const Rational& w) {
  const Rational h(1, static_cast<unsigned long>(n - 1));
  std::map<Rational, std::size_t> price_index;
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a <= b; ++a) price_index.emplace(w * h * b + (1 - w) * h * a, 0);
  }
  EncodedAuction e;
  e.env.agents = {"buyer", "seller"};
  e.env.outcomes = {"none"};
  std::vector<Rational> prices;
  for (auto& [p, idx] : price_index) {
    idx = e.env.outcomes.size();
    e.env.outcomes.push_back("trade@" + to_string(p));
    prices.push_back(p);
  }
  std::vector<std::string> labels, acts;
  for (std::size_t m = 0; m < n; ++m) {
    labels.push_back("v" + std::to_string(m));
    acts.push_back("a" + std::to_string(m));
  }
  e.env.types = {labels, labels};
  e.env.beliefs.assign(2, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(1, n))));
  const std::size_t A = e.env.outcomes.size();
  e.env.utility.assign(2, std::vector<std::vector<Rational>>(A, std::vector<Rational>(n * n, 0)));
  for (std::size_t o = 1; o < A; ++o) {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < n; ++c) {
        // Type profiles are (buyer, seller) with the seller digit fastest.
        e.env.utility[0][o][v * n + c] = h * v - prices[o - 1];
        e.env.utility[1][o][v * n + c] = prices[o - 1] - h * c;
      }
    }
  }
  e.mech.actions = {acts, acts};
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      std::size_t o = b >= a ? price_index.at(w * h * b + (1 - w) * h * a) : 0;
      e.mech.outcome.push_back(Lottery::point(o, A));
    }
  }
  return e;
}

std::set<PureStrategy> product_of(const std::vector<std::vector<std::size_t>>& sets) {
  std::set<PureStrategy> out{{}};
  for (const auto& s : sets) {
    std::set<PureStrategy> next;
    for (const auto& prefix : out) {
      for (std::size_t a : s) {
        auto p = prefix;
        p.push_back(a);
        next.insert(p);
      }
    }
    out = next;
  }
  return out;
}

}  // namespace

TEST_CASE("grid best replies match a direct payoff scan") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    TradeInstance ti;
    ti.grid_n = 2 + uniform_below(rng, 9);
    ti.price_weight = frac(uniform_below(rng, 5), 4);
    auto mass = random_mass(rng, ti.grid_n);
    GridBestReply br = buyer_best_reply(ti, mass, Exec::Serial);
    GridBestReply sr = seller_best_reply(ti, mass, Exec::Serial);
    for (std::size_t t = 0; t < ti.grid_n; ++t) {
      std::vector<Rational> bp(ti.grid_n), sp(ti.grid_n);
      for (std::size_t x = 0; x < ti.grid_n; ++x) {
        bp[x] = oracle::buyer_payoff(ti.grid_n, ti.price_weight, mass, t, x);
        sp[x] = oracle::seller_payoff(ti.grid_n, ti.price_weight, mass, t, x);
      }
      CHECK(br.argmax[t] == oracle::argmax_set(ti.grid_n, bp));
      CHECK(sr.argmax[t] == oracle::argmax_set(ti.grid_n, sp));
      CHECK(br.payoff[t] == bp[br.argmax[t].front()]);
      CHECK(sr.payoff[t] == sp[sr.argmax[t].front()]);
      CHECK(std::count(br.argmax[t].begin(), br.argmax[t].end(), br.selected[t]) == 1);
    }
    CHECK(buyer_best_reply(ti, mass, Exec::Parallel).argmax == br.argmax);
  }
}

TEST_CASE("specialised level-1 auction agrees with the generic level-k engine") {
  for (std::size_t n : {3u, 4u, 5u}) {
    TradeInstance ti;
    ti.grid_n = n;
    DoubleAuctionResult r = double_auction_level_k(ti, 1, Exec::Serial);
    EncodedAuction e = encode_grid_auction(n, ti.price_weight);
    REQUIRE(e.env.validate().empty());
    REQUIRE(e.mech.validate(e.env).empty());
    LevelKResult lk = solve_level_k(e.env, e.mech, LevelKConfig{1, {}});
    const auto& buyers = lk.levels[0][0];
    const auto& sellers = lk.levels[0][1];
    CHECK(std::set<PureStrategy>(buyers.begin(), buyers.end()) == product_of(r.levels[0].buyer.argmax));
    CHECK(std::set<PureStrategy>(sellers.begin(), sellers.end()) == product_of(r.levels[0].seller.argmax));
  }
}

TEST_CASE("level-1 and level-2 buyer closed forms hold to one grid step") {
  TradeInstance ti;
  ti.grid_n = 201;
  DoubleAuctionResult r = double_auction_level_k(ti, 2);
  CHECK(deviation(r, 1, true, ClosedForm::BuyerLevel1).max_selected <= ti.step());
  CHECK(deviation(r, 1, false, ClosedForm::SellerLevel1).max_selected <= ti.step());
  CHECK(deviation(r, 2, true, ClosedForm::BuyerLevel2).max_selected <= ti.step());
  CHECK(deviation(r, 2, false, ClosedForm::SellerLevel2HighBranch).max_selected <= ti.step());
  CHECK(closed_form(ClosedForm::BuyerLevel2, Rational(1, 4)) == Rational(1, 4));
  CHECK(closed_form(ClosedForm::BuyerLevel2, Rational(1, 2)) == Rational(4, 9));
  CHECK(closed_form(ClosedForm::SellerLevel2HighBranch, Rational(5, 6)) == Rational(5, 6));
}

TEST_CASE("closed-form deviations shrink when the grid is refined") {
  TradeInstance a, b;
  a.grid_n = 101;
  b.grid_n = 201;
  DoubleAuctionResult ra = double_auction_level_k(a, 2), rb = double_auction_level_k(b, 2);
  struct Row {
    std::size_t level;
    bool buyer;
    ClosedForm form;
  };
  for (const Row& row : {Row{1, true, ClosedForm::BuyerLevel1}, Row{1, false, ClosedForm::SellerLevel1},
                         Row{2, true, ClosedForm::BuyerLevel2}, Row{2, false, ClosedForm::SellerLevel2HighBranch}}) {
    Rational da = deviation(ra, row.level, row.buyer, row.form).max_selected;
    Rational db = deviation(rb, row.level, row.buyer, row.form).max_selected;
    INFO(to_string(row.form));
    CHECK(db <= Rational(3, 4) * da);
  }
  // The low-branch seller form is not the level-2 best reply: its gap does not close.
  Rational la = deviation(ra, 2, false, ClosedForm::SellerLevel2LowBranch).max_selected;
  Rational lb = deviation(rb, 2, false, ClosedForm::SellerLevel2LowBranch).max_selected;
  CHECK(la > Rational(1, 5));
  CHECK(lb > Rational(1, 5));
}

TEST_CASE("continuum imitation gain and its grid counterpart") {
  const double exact = 1.0 / 96.0;
  CHECK(std::abs(oracle::continuum_imitation_gain(0.5, 0.75, 64) - exact) < 1e-12);
  TradeInstance ti;
  ti.grid_n = 201;
  DoubleAuctionResult r = double_auction_level_k(ti, 1);
  double g201 = r.imitation_gain(1, 100, 150).get_d();
  CHECK(std::abs(g201 - exact) < 1e-3);
  CHECK(g201 > 0);
  TradeInstance coarse;
  coarse.grid_n = 101;
  double g101 = double_auction_level_k(coarse, 1).imitation_gain(1, 50, 75).get_d();
  // Error shrinks as the grid is refined.
  CHECK(std::abs(g201 - exact) <= 0.75 * std::abs(g101 - exact) + 1e-12);
}

namespace {

// Direct recheck of BIC and ex-post IR for buyer payments xb and seller
// receipts xs.
bool trade_constraints_hold(const TradeEnvironment& env, const EfficiencyRule& rule,
                            const std::vector<std::vector<Rational>>& xb,
                            const std::vector<std::vector<Rational>>& xs) {
  const auto& V = env.buyer_values;
  const auto& C = env.seller_costs;
  auto q = [&](std::size_t v, std::size_t c) { return rule.trade_probability(V[v], C[c]); };
  for (std::size_t v = 0; v < V.size(); ++v) {
    for (std::size_t c = 0; c < C.size(); ++c) {
      if (q(v, c) * V[v] - xb[v][c] < 0) return false;
      if (xs[v][c] - q(v, c) * C[c] < 0) return false;
    }
  }
  for (std::size_t v = 0; v < V.size(); ++v) {
    for (std::size_t r = 0; r < V.size(); ++r) {
      Rational truth = 0, lie = 0;
      for (std::size_t c = 0; c < C.size(); ++c) {
        truth += env.seller_prior[c] * (q(v, c) * V[v] - xb[v][c]);
        lie += env.seller_prior[c] * (q(r, c) * V[v] - xb[r][c]);
      }
      if (lie > truth) return false;
    }
  }
  for (std::size_t c = 0; c < C.size(); ++c) {
    for (std::size_t r = 0; r < C.size(); ++r) {
      Rational truth = 0, lie = 0;
      for (std::size_t v = 0; v < V.size(); ++v) {
        truth += env.buyer_prior[v] * (xs[v][c] - q(v, c) * C[c]);
        lie += env.buyer_prior[v] * (xs[v][r] - q(v, r) * C[c]);
      }
      if (lie > truth) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("budget-balanced efficient trade: separated supports versus overlapping grid") {
  TradeEnvironment sep = uniform_trade_support({Rational(2), Rational(3)}, {Rational(0), Rational(1)});
  MsResult a = ms_feasibility(sep);
  REQUIRE(a.feasible);
  CHECK(a.verified);
  CHECK(trade_constraints_hold(sep, {}, a.transfers, a.transfers));

  // Overlapping 2x2 supports are still feasible; the LP finds transfers.
  TradeEnvironment overlap = uniform_trade_support({Rational(1), Rational(3)}, {Rational(0), Rational(2)});
  MsResult o = ms_feasibility(overlap);
  REQUIRE(o.feasible);
  CHECK(o.verified);
  CHECK(trade_constraints_hold(overlap, {}, o.transfers, o.transfers));

  for (std::size_t n : {2u, 3u, 4u}) {
    MsResult b = ms_feasibility(uniform_trade_grid(n));
    CHECK_FALSE(b.feasible);
    CHECK(b.verified);
    CHECK(std::any_of(b.certificate.begin(), b.certificate.end(), [](const Rational& y) { return y != 0; }));
  }
}

TEST_CASE("minimal subsidy equals the grid VCG deficit") {
  for (std::size_t n : {2u, 3u, 5u, 8u, 20u}) {
    TradeEnvironment env = uniform_trade_grid(n);
    SubsidyResult s = minimal_subsidy(env);
    // E[(v - c)^+] on the uniform grid, summed directly.
    Rational vcg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < v; ++c) vcg += env.buyer_values[v] - env.seller_costs[c];
    }
    vcg /= static_cast<unsigned long>(n * n);
    CHECK(s.minimal_subsidy == vcg);
    CHECK(s.minimal_subsidy == frac(n + 1, 6 * n));
    CHECK(s.minimal_subsidy > 0);
    CHECK(s.certified_bound == s.minimal_subsidy);
    CHECK(s.primal_verified);
    CHECK(s.dual_verified);
    CHECK(trade_constraints_hold(env, {}, s.buyer_pays, s.seller_receives));
    Rational expected = 0;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < n; ++c) {
        expected += env.buyer_prior[v] * env.seller_prior[c] * (s.seller_receives[v][c] - s.buyer_pays[v][c]);
      }
    }
    CHECK(expected == s.minimal_subsidy);
  }
  CHECK(minimal_subsidy(uniform_trade_grid(20)).minimal_subsidy == Rational(7, 40));
}

TEST_CASE("revenue gap between second-price and pay-as-bid shrinks with the grid") {
  for (std::size_t bidders : {2u, 3u}) {
    for (std::size_t n : {4u, 8u, 16u}) {
      if (bidders == 3 && n > 8) continue;
      AuctionEnvironment env = uniform_grid_auction(bidders, n);
      AllocationSCF sp = second_price_rule(env), fp = first_price_style_rule(env);
      CHECK(allocation_bic(env, sp));
      CHECK(allocation_bic(env, fp));
      RevenueEquivalenceReport r = revenue_equivalence_check(env, sp, fp);
      REQUIRE(r.precondition_ok);
      CHECK(r.within_bound);
      CHECK(r.max_gap * static_cast<unsigned long>(n) <= 2);
      CHECK(revenue_equivalence_check(env, sp, sp).max_gap == 0);
      CHECK(revenue_equivalence_check(env, fp, sp).max_gap == r.max_gap);
    }
  }
}

TEST_CASE("full surplus extraction breaks partial BIC") {
  AuctionEnvironment env = uniform_auction({{Rational(1), Rational(2)}, {Rational(1), Rational(2)}});
  AllocationSCF f = fully_extractive_rule(env);
  SurplusReport s = surplus_extraction_check(env, {f});
  REQUIRE(s.preconditions());
  CHECK(s.partial_bic_fails);
  REQUIRE(s.witnesses.size() == 2);
  for (const auto& w : s.witnesses) {
    CHECK(w.gain == Rational(1, 4));
    Rational direct = allocation_interim(env, f, w.agent, w.true_type, w.report) -
                      allocation_interim(env, f, w.agent, w.true_type, w.true_type);
    CHECK(direct == w.gain);
  }
  CHECK_FALSE(allocation_bic(env, f));
}

TEST_CASE("revenue check refuses assignment-inequivalent rules") {
  AuctionEnvironment env = uniform_grid_auction(2, 4);
  AllocationSCF sp = second_price_rule(env);
  AllocationSCF other = sp;
  for (auto& q : other.q) q = {Rational(1), Rational(0)};
  for (auto& x : other.x) x = {Rational(0), Rational(0)};
  RevenueEquivalenceReport r = revenue_equivalence_check(env, sp, other);
  CHECK_FALSE(r.precondition_ok);
  CHECK_FALSE(r.precondition_failure.empty());
}

TEST_CASE("surplus extraction preconditions") {
  AuctionEnvironment env = uniform_auction({{Rational(1), Rational(2)}, {Rational(1), Rational(2)}});
  AllocationSCF free = efficient_allocation(env, "free");
  SurplusReport s = surplus_extraction_check(env, {free});
  CHECK_FALSE(s.fully_extractive);
  CHECK_FALSE(s.preconditions());

  // Only the top type ever wins, and pays its value.
  AllocationSCF exclusive{"exclusive", {}, {}};
  const MixedRadix ts = env.type_space();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    std::vector<Rational> q(2, 0), x(2, 0);
    for (std::size_t i = 0; i < 2; ++i) {
      if (ts.digit(t, i) == 1 && std::all_of(q.begin(), q.end(), [](const Rational& v) { return v == 0; })) {
        q[i] = 1;
        x[i] = env.value(i, t);
      }
    }
    exclusive.q.push_back(q);
    exclusive.x.push_back(x);
  }
  SurplusReport e = surplus_extraction_check(env, {exclusive});
  CHECK(e.fully_extractive);
  CHECK_FALSE(e.inclusive);
  CHECK_FALSE(e.preconditions());
}
