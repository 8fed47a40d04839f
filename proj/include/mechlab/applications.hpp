#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechlab/game.hpp"
#include "mechlab/guard.hpp"
#include "mechlab/lp.hpp"

namespace mechlab {

// ---------------------------------------------------------------------------
// Level-k ½-double auction on a uniform value grid {0, h, ..., 1}, h = 1/(n-1).
// Both sides' level-0 behaviour is uniform over the grid; trade happens when
// bid >= ask at price w*bid + (1-w)*ask.

struct TradeInstance {
  std::size_t grid_n = 201;
  Rational price_weight{1, 2};

  Rational step() const { return Rational(1, static_cast<unsigned long>(grid_n - 1)); }
  Rational value(std::size_t m) const { return step() * static_cast<unsigned long>(m); }
};

struct GridBestReply {
  std::vector<std::vector<std::size_t>> argmax;  // [own type] all maximising grid actions
  std::vector<std::size_t> selected;             // nearest own value, then lower
  std::vector<Rational> payoff;                  // maximal interim payoff
};

struct AuctionLevel {
  std::size_t level = 1;
  GridBestReply buyer;
  GridBestReply seller;
};

struct DoubleAuctionResult {
  TradeInstance inst;
  std::vector<AuctionLevel> levels;  // levels[k-1]

  bool trades(std::size_t level, std::size_t v, std::size_t c) const;
  Rational price(std::size_t level, std::size_t v, std::size_t c) const;
  // Buyer of value v reporting (and so bidding) as value v_report, averaged
  // over the uniform seller population at the same level.
  Rational buyer_interim(std::size_t level, std::size_t v, std::size_t v_report) const;
  Rational imitation_gain(std::size_t level, std::size_t v, std::size_t v_report) const;
};

DoubleAuctionResult double_auction_level_k(const TradeInstance& inst, std::size_t k_max,
                                           Exec exec = Exec::Parallel);

// Best replies of one side on the grid against an opponent action mass
// function on the grid.
GridBestReply buyer_best_reply(const TradeInstance& inst, const std::vector<Rational>& ask_mass,
                               Exec exec = Exec::Parallel);
GridBestReply seller_best_reply(const TradeInstance& inst, const std::vector<Rational>& bid_mass,
                                Exec exec = Exec::Parallel);

// Piecewise-linear continuum forms for the first two levels (w = 1/2).
enum class ClosedForm {
  BuyerLevel1,             // 2v/3
  SellerLevel1,            // 2c/3 + 1/3
  BuyerLevel2,             // 2v/3 + 1/9 for v >= 1/3, v otherwise
  SellerLevel2LowBranch,   // 2c/3 + 2/9 for c >= 1/3, c otherwise
  SellerLevel2HighBranch,  // 2c/3 + 2/9 for c <= 2/3, c otherwise
};

Rational closed_form(ClosedForm form, const Rational& x);
std::string to_string(ClosedForm form);

struct DeviationDiagnostic {
  ClosedForm form;
  Rational max_selected;  // max |selected action - form| over own types
  Rational max_set;       // max over own types of the distance from form to the argmax set
  std::size_t worst_type = 0;
};

DeviationDiagnostic deviation(const DoubleAuctionResult& r, std::size_t level, bool buyer, ClosedForm form);

// ---------------------------------------------------------------------------
// Bilateral trade with independent private values and ex-post IR.

struct TradeEnvironment {
  std::vector<Rational> buyer_values;
  std::vector<Rational> seller_costs;
  std::vector<Rational> buyer_prior;
  std::vector<Rational> seller_prior;

  std::vector<Diagnostic> validate() const;
};

TradeEnvironment uniform_trade_grid(std::size_t n);
TradeEnvironment uniform_trade_support(std::vector<Rational> values, std::vector<Rational> costs);

enum class TieRule { Trade, NoTrade };

struct EfficiencyRule {
  TieRule tie = TieRule::Trade;
  Rational trade_probability(const Rational& v, const Rational& c) const;
};

// Unknowns x(v,c), the buyer's payment to the seller, with BIC and ex-post IR
// rows for both sides.
struct FeasibilityProblem {
  lp::Problem lp;
  std::vector<std::vector<std::size_t>> var;  // [v][c]
  std::vector<std::vector<Rational>> q;       // efficient trade probability
};

FeasibilityProblem build_budget_balanced_problem(const TradeEnvironment& env, const EfficiencyRule& rule);

struct MsResult {
  bool feasible = false;
  std::vector<std::vector<Rational>> transfers;  // when feasible
  std::vector<Rational> certificate;             // Farkas multipliers when infeasible
  bool verified = false;                         // exact recheck of the verdict
  std::size_t pivots = 0;
};

MsResult ms_feasibility(const TradeEnvironment& env, const EfficiencyRule& rule = {});

// Minimal expected subsidy E[x_S - x_B] when the buyer's payment x_B and the
// seller's receipt x_S are decoupled.
struct SubsidyResult {
  Rational minimal_subsidy;
  std::vector<std::vector<Rational>> buyer_pays;
  std::vector<std::vector<Rational>> seller_receives;
  std::vector<Rational> dual;  // multipliers on the full ex-post system
  Rational certified_bound;    // b.y, a lower bound on the subsidy
  bool primal_verified = false;
  bool dual_verified = false;
  lp::Problem full_problem;
};

SubsidyResult minimal_subsidy(const TradeEnvironment& env, const EfficiencyRule& rule = {});

// ---------------------------------------------------------------------------
// Single-object allocation environments with transfers to the designer.

struct AuctionEnvironment {
  std::vector<std::vector<Rational>> types;  // per agent, strictly increasing
  std::vector<Rational> prior;               // joint, full support, over T
  std::vector<std::vector<Rational>> values; // [i][t]; defaults to t_i when empty

  MixedRadix type_space() const;
  Rational value(std::size_t i, std::size_t t) const;
  std::vector<std::vector<std::vector<Rational>>> beliefs() const;
  std::vector<Diagnostic> validate() const;
};

struct AllocationSCF {
  std::string name;
  std::vector<std::vector<Rational>> q;  // [t][i] probability i gets the object
  std::vector<std::vector<Rational>> x;  // [t][i] transfer from i
};

AuctionEnvironment uniform_grid_auction(std::size_t bidders, std::size_t n);
AuctionEnvironment uniform_auction(std::vector<std::vector<Rational>> types);

AllocationSCF efficient_allocation(const AuctionEnvironment& env, std::string name);
AllocationSCF second_price_rule(const AuctionEnvironment& env);
// Same allocation; winner pays a type-dependent bid chosen so that every
// downward local incentive constraint binds.
AllocationSCF first_price_style_rule(const AuctionEnvironment& env);
AllocationSCF fully_extractive_rule(const AuctionEnvironment& env);

Rational allocation_interim(const AuctionEnvironment& env, const AllocationSCF& f, std::size_t i,
                            std::size_t t_i, std::size_t report);
bool allocation_bic(const AuctionEnvironment& env, const AllocationSCF& f);

// Generic encoding: outcomes are the distinct (q, x) vectors used by F.
struct EncodedAllocation {
  Environment env;
  SCS scfs;
};
EncodedAllocation encode_allocation(const AuctionEnvironment& env, const std::vector<AllocationSCF>& F);

struct SurplusWitness {
  std::size_t scf = 0;
  std::size_t agent = 0;
  std::size_t true_type = 0;
  std::size_t report = 0;
  Rational gain;
};

struct SurplusReport {
  bool fully_extractive = false;
  bool inclusive = false;
  bool increasing_values = false;
  bool preconditions() const { return fully_extractive && inclusive && increasing_values; }
  // For each agent, the top type cell and one profitable misreport per SCF.
  std::vector<SurplusWitness> witnesses;
  bool partial_bic_fails = false;  // some cell has no BIC member, cross-checked generically
  std::string note;
};

SurplusReport surplus_extraction_check(const AuctionEnvironment& env, const std::vector<AllocationSCF>& F);

struct RevenueEquivalenceReport {
  bool precondition_ok = false;
  std::string precondition_failure;
  Rational max_gap;        // max_i max_{t_i} |normalised interim transfer difference|
  std::size_t agent = 0;
  std::size_t type = 0;
  Rational envelope_bound; // sum over adjacent types of step * |change in interim allocation|
  bool within_bound = false;
};

RevenueEquivalenceReport revenue_equivalence_check(const AuctionEnvironment& env, const AllocationSCF& f,
                                                   const AllocationSCF& g);

}  // namespace mechlab
