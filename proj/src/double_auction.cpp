#include <algorithm>

#include "mechlab/applications.hpp"

namespace mechlab {

namespace {

void validate_instance(const TradeInstance& inst, std::size_t k_max) {
  std::vector<Diagnostic> d;
  if (inst.grid_n < 2) d.push_back({"grid-too-small", "grid_n must be at least 2", "grid_n"});
  if (inst.price_weight < 0 || inst.price_weight > 1) {
    d.push_back({"price-weight-range", "price_weight must lie in [0,1]", "price_weight"});
  }
  if (k_max < 1) d.push_back({"level-range", "k must be at least 1", "k"});
  if (!d.empty()) throw InputError(std::move(d));
  mpz_class cells = mpz_class(static_cast<unsigned long>(inst.grid_n)) * inst.grid_n * k_max;
  require_within_budget(cells, "double auction grid");
}

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Fills argmax / selected / payoff for own type m from a payoff callback.
template <typename Payoff>
void best_reply_cell(std::size_t n, std::size_t m, const Payoff& payoff, GridBestReply& out) {
  Rational best = payoff(0);
  std::vector<std::size_t> arg{0};
  for (std::size_t a = 1; a < n; ++a) {
    Rational u = payoff(a);
    if (u > best) {
      best = u;
      arg.assign(1, a);
    } else if (u == best) {
      arg.push_back(a);
    }
  }
  std::size_t sel = arg.front();
  for (std::size_t a : arg) {
    if (distance(a, m) < distance(sel, m)) sel = a;
  }
  out.argmax[m] = std::move(arg);
  out.selected[m] = sel;
  out.payoff[m] = best;
}

template <typename Cell>
void for_each_type(std::size_t n, Exec exec, const Cell& cell) {
  if (exec == Exec::Serial) {
    for (std::size_t m = 0; m < n; ++m) cell(m);
    return;
  }
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long m = 0; m < nn; ++m) cell(static_cast<std::size_t>(m));
}

GridBestReply empty_reply(std::size_t n) {
  GridBestReply r;
  r.argmax.resize(n);
  r.selected.assign(n, 0);
  r.payoff.assign(n, Rational(0));
  return r;
}

std::vector<Rational> action_mass(const std::vector<std::size_t>& selected) {
  const std::size_t n = selected.size();
  std::vector<Rational> mass(n, Rational(0));
  const Rational each(1, static_cast<unsigned long>(n));
  for (std::size_t a : selected) mass[a] += each;
  return mass;
}

}  // namespace

GridBestReply buyer_best_reply(const TradeInstance& inst, const std::vector<Rational>& ask_mass,
                               Exec exec) {
  const std::size_t n = inst.grid_n;
  const Rational h = inst.step();
  const Rational& w = inst.price_weight;
  // F(b) = P[ask <= b], G(b) = E[ask index; ask <= b].
  std::vector<Rational> F(n), G(n);
  Rational f = 0, g = 0;
  for (std::size_t a = 0; a < n; ++a) {
    f += ask_mass[a];
    g += ask_mass[a] * static_cast<unsigned long>(a);
    F[a] = f;
    G[a] = g;
  }
  GridBestReply out = empty_reply(n);
  for_each_type(n, exec, [&](std::size_t m) {
    const Rational v = h * static_cast<unsigned long>(m);
    auto payoff = [&](std::size_t b) -> Rational {
      Rational r = F[b] * (v - h * w * static_cast<unsigned long>(b));
      r -= h * (1 - w) * G[b];
      return r;
    };
    best_reply_cell(n, m, payoff, out);
  });
  return out;
}

GridBestReply seller_best_reply(const TradeInstance& inst, const std::vector<Rational>& bid_mass,
                                Exec exec) {
  const std::size_t n = inst.grid_n;
  const Rational h = inst.step();
  const Rational& w = inst.price_weight;
  // H(a) = P[bid >= a], K(a) = E[bid index; bid >= a].
  std::vector<Rational> H(n), K(n);
  Rational hh = 0, kk = 0;
  for (std::size_t b = n; b-- > 0;) {
    hh += bid_mass[b];
    kk += bid_mass[b] * static_cast<unsigned long>(b);
    H[b] = hh;
    K[b] = kk;
  }
  GridBestReply out = empty_reply(n);
  for_each_type(n, exec, [&](std::size_t m) {
    const Rational c = h * static_cast<unsigned long>(m);
    auto payoff = [&](std::size_t a) -> Rational {
      Rational r = h * w * K[a];
      r += H[a] * (h * (1 - w) * static_cast<unsigned long>(a) - c);
      return r;
    };
    best_reply_cell(n, m, payoff, out);
  });
  return out;
}

DoubleAuctionResult double_auction_level_k(const TradeInstance& inst, std::size_t k_max, Exec exec) {
  validate_instance(inst, k_max);
  const std::size_t n = inst.grid_n;
  DoubleAuctionResult r;
  r.inst = inst;
  std::vector<Rational> uniform(n, Rational(1, static_cast<unsigned long>(n)));
  std::vector<Rational> bids = uniform, asks = uniform;
  for (std::size_t k = 1; k <= k_max; ++k) {
    AuctionLevel lv;
    lv.level = k;
    lv.buyer = buyer_best_reply(inst, asks, exec);
    lv.seller = seller_best_reply(inst, bids, exec);
    bids = action_mass(lv.buyer.selected);
    asks = action_mass(lv.seller.selected);
    r.levels.push_back(std::move(lv));
  }
  return r;
}

bool DoubleAuctionResult::trades(std::size_t level, std::size_t v, std::size_t c) const {
  const AuctionLevel& lv = levels.at(level - 1);
  return lv.buyer.selected.at(v) >= lv.seller.selected.at(c);
}

Rational DoubleAuctionResult::price(std::size_t level, std::size_t v, std::size_t c) const {
  const AuctionLevel& lv = levels.at(level - 1);
  const Rational& w = inst.price_weight;
  return inst.step() * (w * static_cast<unsigned long>(lv.buyer.selected.at(v)) +
                        (1 - w) * static_cast<unsigned long>(lv.seller.selected.at(c)));
}

Rational DoubleAuctionResult::buyer_interim(std::size_t level, std::size_t v, std::size_t v_report) const {
  const Rational value = inst.value(v);
  Rational total = 0;
  for (std::size_t c = 0; c < inst.grid_n; ++c) {
    if (trades(level, v_report, c)) total += value - price(level, v_report, c);
  }
  return total / static_cast<unsigned long>(inst.grid_n);
}

Rational DoubleAuctionResult::imitation_gain(std::size_t level, std::size_t v, std::size_t v_report) const {
  return buyer_interim(level, v, v_report) - buyer_interim(level, v, v);
}

Rational closed_form(ClosedForm form, const Rational& x) {
  const Rational two_thirds(2, 3), third(1, 3);
  switch (form) {
    case ClosedForm::BuyerLevel1: return two_thirds * x;
    case ClosedForm::SellerLevel1: return two_thirds * x + third;
    case ClosedForm::BuyerLevel2: return x >= third ? Rational(two_thirds * x + Rational(1, 9)) : x;
    case ClosedForm::SellerLevel2LowBranch:
      return x >= third ? Rational(two_thirds * x + Rational(2, 9)) : x;
    case ClosedForm::SellerLevel2HighBranch:
      return x <= two_thirds ? Rational(two_thirds * x + Rational(2, 9)) : x;
  }
  return x;
}

std::string to_string(ClosedForm form) {
  switch (form) {
    case ClosedForm::BuyerLevel1: return "buyer.level1 2v/3";
    case ClosedForm::SellerLevel1: return "seller.level1 2c/3+1/3";
    case ClosedForm::BuyerLevel2: return "buyer.level2 2v/3+1/9 (v>=1/3) else v";
    case ClosedForm::SellerLevel2LowBranch: return "seller.level2 2c/3+2/9 (c>=1/3) else c";
    case ClosedForm::SellerLevel2HighBranch: return "seller.level2 2c/3+2/9 (c<=2/3) else c";
  }
  return "?";
}

DeviationDiagnostic deviation(const DoubleAuctionResult& r, std::size_t level, bool buyer, ClosedForm form) {
  const GridBestReply& t = buyer ? r.levels.at(level - 1).buyer : r.levels.at(level - 1).seller;
  const Rational h = r.inst.step();
  DeviationDiagnostic d{form, Rational(0), Rational(0), 0};
  for (std::size_t m = 0; m < r.inst.grid_n; ++m) {
    const Rational target = closed_form(form, r.inst.value(m));
    Rational sel = abs(h * static_cast<unsigned long>(t.selected[m]) - target);
    Rational set = -1;
    for (std::size_t a : t.argmax[m]) {
      Rational dist = abs(h * static_cast<unsigned long>(a) - target);
      if (set < 0 || dist < set) set = dist;
    }
    if (sel > d.max_selected) {
      d.max_selected = sel;
      d.worst_type = m;
    }
    d.max_set = std::max(d.max_set, set);
  }
  return d;
}

}  // namespace mechlab
