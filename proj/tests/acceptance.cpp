// One line per acceptance criterion. Exit status is nonzero when any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "mechlab/applications.hpp"
#include "mechlab/choice.hpp"
#include "mechlab/core_ops.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/epistemic.hpp"
#include "mechlab/fixtures.hpp"
#include "mechlab/instance_io.hpp"
#include "mechlab/properties.hpp"
#include "oracles.hpp"

using namespace mechlab;

namespace {

// Pinned tolerances and budgets.
constexpr double kFixtureSeconds = 1.0;
constexpr double kAuctionSeconds = 30.0;
constexpr double kSweepSeconds = 300.0;
constexpr double kApplicationSeconds = 120.0;
constexpr double kExtensionSeconds = 120.0;
constexpr double kQuadratureTolerance = 1e-3;
constexpr std::size_t kAuctionGrid = 201;
constexpr std::size_t kSweepTrials = 500;
constexpr std::uint64_t kSweepSeed = 2024;
constexpr std::size_t kOracleInstances = 200;
constexpr std::size_t kSubsidyGrid = 20;
constexpr std::size_t kRevenueGrid = 50;
const Rational kRevenueConstant(2);
constexpr std::size_t kEpistemicModels = 100;
constexpr std::size_t kCorollaryTrials = 100;
constexpr std::uint64_t kCorollarySeed = 3;
constexpr std::size_t kCorollaryActs = 4;

int failures = 0;

void line(const std::string& id, bool ok, const std::string& what) {
  std::printf("%-6s %s  %s\n", id.c_str(), ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

void info(const std::string& id, const std::string& what) { std::printf("%-6s INFO  %s\n", id.c_str(), what.c_str()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

std::set<oracle::PureProfile> pure_set(const SolutionSet& s) {
  std::set<oracle::PureProfile> out;
  for (const auto& p : s.profiles) {
    if (p.pure) out.insert(*p.pure);
  }
  return out;
}

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  auto g = fixtures::three_by_three();
  SolutionSet bne = solve_pure_bne(g.env, g.mech);
  bool b = pure_set(bne) == std::set<oracle::PureProfile>{{{0}, {0}}} && bne.size() == 1;
  auto icr = solve_rationalizable(g.env, g.mech, DeltaRestriction::unrestricted(g.env, g.mech));
  bool all9 = icr.solutions.size() == 9 && pure_set(icr.solutions).size() == 9;
  auto d = solve_rationalizable(g.env, g.mech, DeltaRestriction::from_action_sets(g.env, g.mech, {{1, 2}, {1, 2}}));
  bool no_a = !d.solutions.empty();
  for (const auto& p : pure_set(d.solutions)) no_a = no_a && p[0][0] != 0 && p[1][0] != 0;
  double t = seconds_since(t0);
  line("1.a", b, "3x3 BNE is exactly {(A,A)}");
  line("1.b", all9, "3x3 unrestricted delta-rationalizability keeps all 9 pure profiles");
  line("1.c", no_a, "3x3 with conjectures on {B,C}: " + std::to_string(d.solutions.size()) + " profiles, none uses A");
  line("1.t", t < kFixtureSeconds, "runtime " + secs(t) + " < 1s");
}

void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  auto g = fixtures::cursed_game(Rational(3));
  SolutionSet ce = solve_cursed(g.env, g.mech, CursedConfig{Rational(1, 2)});
  bool unique = ce.size() == 1 && pure_set(ce) == std::set<oracle::PureProfile>{{{0, 1}, {0, 1}}};
  bool bic_fails = false;
  Rational truthful = 0;
  if (ce.size() == 1) {
    SCF f = outcome_of(g.env, g.mech, ce.profiles[0]);
    BicReport r = check_bic(g.env, f);
    if (r.violation) {
      truthful = r.violation->truthful;
      bic_fails = !r.holds && r.violation->type == 0 && truthful == Rational(-1, 2) &&
                  truthful == 1 - Rational(3) / 2;
    }
  }
  PropertyVerdict w = check_wsc(g.env, g.mech, ce);
  bool wsc_cell = !w.holds;
  bool type1_missing = false;
  for (const auto& c : w.cells) {
    if (c.type == 0 && !c.witness) type1_missing = true;
  }
  double t = seconds_since(t0);
  line("2.a", unique, "cursed (zeta=3, chi=1/2) unique CE: type 1 -> A, type -1 -> B");
  line("2.b", bic_fails, "CE outcome fails BIC at type 1, truthful interim value " + to_string(truthful) + " = 1 - zeta/2");
  line("2.c", wsc_cell && type1_missing, "WSC fails at type 1");
  line("2.t", t < kFixtureSeconds, "runtime " + secs(t) + " < 1s");
}

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  TradeInstance ti;
  ti.grid_n = kAuctionGrid;
  DoubleAuctionResult r = double_auction_level_k(ti, 2);
  const Rational step = ti.step();
  auto form_line = [&](const std::string& id, std::size_t level, bool buyer, ClosedForm form) {
    DeviationDiagnostic d = deviation(r, level, buyer, form);
    line(id, d.max_selected <= step,
         to_string(form) + ": max deviation " + to_string(Rational(d.max_selected / step)) + " grid steps (limit 1), worst at " +
             to_string(ti.value(d.worst_type)));
  };
  form_line("3.a", 1, true, ClosedForm::BuyerLevel1);
  form_line("3.b", 1, false, ClosedForm::SellerLevel1);
  form_line("3.c", 2, true, ClosedForm::BuyerLevel2);
  form_line("3.d", 2, false, ClosedForm::SellerLevel2LowBranch);
  {
    DeviationDiagnostic d = deviation(r, 2, false, ClosedForm::SellerLevel2HighBranch);
    info("3.d'", to_string(ClosedForm::SellerLevel2HighBranch) + ": max deviation " +
                     to_string(Rational(d.max_selected / step)) + " grid steps (exact level-2 seller best reply)");
  }

  // Grid point nearest 1/4.
  std::size_t q = 0;
  for (std::size_t m = 0; m < ti.grid_n; ++m) {
    if (abs(ti.value(m) - Rational(1, 4)) < abs(ti.value(q) - Rational(1, 4))) q = m;
  }
  const auto& L1 = r.levels[0];
  const auto& L2 = r.levels[1];
  line("3.e", r.trades(2, q, q) && !r.trades(1, q, q),
       "v=c=" + to_string(ti.value(q)) + ": level-2 bid " + to_string(ti.value(L2.buyer.selected[q])) + " ask " +
           to_string(ti.value(L2.seller.selected[q])) + " trades=" + (r.trades(2, q, q) ? "yes" : "no") +
           "; level-1 bid " + to_string(ti.value(L1.buyer.selected[q])) + " ask " +
           to_string(ti.value(L1.seller.selected[q])) + " trades=" + (r.trades(1, q, q) ? "yes" : "no"));
  {
    // v=0.6, c=0.2: level 1 does not trade, level 2 does.
    const std::size_t v = 120, c = 40;
    info("3.e'", std::string("v=0.6 c=0.2: level-1 trades=") + (r.trades(1, v, c) ? "yes" : "no") + ", level-2 trades=" +
                     (r.trades(2, v, c) ? "yes" : "no") + " at price " + to_string(r.price(2, v, c)));
  }

  const double target = oracle::continuum_imitation_gain(0.5, 0.75, 256);
  const double gain = r.imitation_gain(1, (ti.grid_n - 1) / 2, 3 * (ti.grid_n - 1) / 4).get_d();
  char buf[160];
  std::snprintf(buf, sizeof buf, "buyer v=0.5 imitating 0.75: gain %.6f, quadrature %.6f (1/96), |diff| %.2e <= 1e-3", gain,
                target, std::abs(gain - target));
  line("3.f", gain > 0 && std::abs(gain - target) <= kQuadratureTolerance && std::abs(target - 1.0 / 96.0) < 1e-9, buf);
  double t = seconds_since(t0);
  line("3.t", t < kAuctionSeconds, "runtime " + secs(t) + " < 30s");
}

void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  const InstanceSizes sizes{2, 2, 2, 3};
  const char* names[] = {"T1", "T2", "T3", "T4", "T5"};
  const TheoremId ids[] = {TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T5};
  for (int k = 0; k < 5; ++k) {
    SweepReport rep = validate_theorem(ids[k], kSweepTrials, sizes, kSweepSeed);
    std::size_t met = 0;
    std::string counts;
    for (const auto& [name, n] : rep.hypothesis_met) {
      met += n;
      counts += (counts.empty() ? "" : " ") + name + "=" + std::to_string(n);
    }
    line(std::string("4.") + static_cast<char>('a' + k), rep.counterexamples == 0 && met > 0,
         std::string(names[k]) + ": " + std::to_string(rep.counterexamples) + " counterexamples over " +
             std::to_string(kSweepTrials) + " trials; hypothesis met " + counts);
  }
  double t = seconds_since(t0);
  line("4.t", t < kSweepSeconds, "runtime " + secs(t) + " < 300s");
}

void criterion5() {
  std::size_t icr_bad = 0, bne_bad = 0;
  for (std::uint64_t k = 0; k < kOracleInstances; ++k) {
    InstanceSizes sz{2, 1 + k % 2, 2 + (k / 2) % 2, 2 + (k / 4) % 2};
    auto ri = random_instance(trial_seed(5, k), sz);
    if (solve_rationalizable(ri.env, ri.mech, std::nullopt).surviving != oracle::icr_by_elimination(ri.env, ri.mech)) ++icr_bad;
    if (pure_set(solve_pure_bne(ri.env, ri.mech)) != oracle::naive_pure_bne(ri.env, ri.mech)) ++bne_bad;
  }
  line("5.a", icr_bad == 0, "ICR vs Fourier-Motzkin elimination oracle: " + std::to_string(icr_bad) + " discrepancies over " +
                                std::to_string(kOracleInstances) + " instances up to (2,2,3,3)");
  line("5.b", bne_bad == 0, "pure BNE vs naive checker: " + std::to_string(bne_bad) + " discrepancies");
}

void criterion6() {
  std::size_t violations = 0, applicable = 0;
  const InstanceSizes sizes{2, 2, 2, 3};
  for (std::size_t k = 0; k < kSweepTrials; ++k) {
    auto ri = random_instance(trial_seed(kSweepSeed, k), sizes);
    for (const auto& c : audit_implications(ri.env, ri.mech, ri.scf)) {
      if (!c.applicable) continue;
      ++applicable;
      if (!c.holds) ++violations;
    }
  }
  line("6", violations == 0, "implication suite on the sweep instances: " + std::to_string(violations) + " violations in " +
                                 std::to_string(applicable) + " applicable checks");
}

void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  TradeEnvironment sep = uniform_trade_support({Rational(2), Rational(3)}, {Rational(0), Rational(1)});
  MsResult m = ms_feasibility(sep);
  line("7.a", m.feasible && m.verified, "v in {2,3}, c in {0,1}: feasible budget-balanced transfers, exact recheck passed");

  SubsidyResult s = minimal_subsidy(uniform_trade_grid(kSubsidyGrid));
  line("7.b", s.minimal_subsidy > 0 && s.primal_verified && s.dual_verified && s.certified_bound == s.minimal_subsidy,
       "n=20 grid: minimal subsidy " + to_string(s.minimal_subsidy) + " > 0, dual bound " + to_string(s.certified_bound));

  AuctionEnvironment env = uniform_grid_auction(2, kRevenueGrid);
  AllocationSCF sp = second_price_rule(env), fp = first_price_style_rule(env);
  RevenueEquivalenceReport r = revenue_equivalence_check(env, sp, fp);
  Rational C = r.max_gap * static_cast<unsigned long>(kRevenueGrid);
  line("7.c", r.precondition_ok && C <= kRevenueConstant,
       "n=50 second-price vs pay-as-bid: gap " + to_string(r.max_gap) + " = C/n with C=" + to_string(C) + " (limit 2)");
  line("7.d", revenue_equivalence_check(env, sp, sp).max_gap == 0, "f = f: gap exactly 0");
  double t = seconds_since(t0);
  line("7.t", t < kApplicationSeconds, "runtime " + secs(t) + " < 120s");
}

void criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  auto g = fixtures::three_by_three();
  SolutionSet bne = solve_pure_bne(g.env, g.mech);
  auto back = validate_epistemic_theorems(g.env, g.mech, bne, Direction::WitnessesToModel);
  line("8.a", back.hypothesis_met && back.holds, "3x3 BNE: constructed model satisfies RAT and K(W and SOL) at every cell");
  Instance inst = parse_instance(MECHLAB_FIXTURE_DIR "/three_by_three_epistemic.json");
  auto fwd = validate_epistemic_theorems(inst.env, *inst.mech, bne, Direction::ModelToWitnesses, inst.epistemic);
  line("8.b", fwd.hypothesis_met && fwd.holds, "3x3 BNE: extracted witnesses satisfy the mimicry inequalities");

  std::size_t k_bad = 0, sol_bad = 0;
  std::mt19937_64 draw(8);
  for (std::uint64_t k = 0; k < kEpistemicModels; ++k) {
    auto ri = random_instance(trial_seed(8, k), InstanceSizes{2, 2, 2, 3});
    SolutionSet sol = k % 2 ? solve_rationalizable(ri.env, ri.mech, std::nullopt).solutions : solve_pure_bne(ri.env, ri.mech);
    std::mt19937_64 rng(trial_seed(80, k));
    EpistemicModel m = random_epistemic_model(ri.env, ri.mech, rng);
    EpistemicAnalysis a(ri.env, ri.mech, m, sol);
    oracle::EpistemicEvents o = oracle::two_agent_events(ri.env, ri.mech, m, sol);
    const std::size_t N = a.states().size();
    Event E(N), F(N);
    for (std::size_t s = 0; s < N; ++s) {
      E[s] = draw() % 2;
      F[s] = E[s] || draw() % 2;
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (!event_subset(a.K(i, E), a.K(i, F))) ++k_bad;
      if (a.SOL(i) != event_and(a.TT(i), a.PM(i)) || a.SOL(i) != o.SOL[i] || a.TT(i) != o.TT[i] || a.PM(i) != o.PM[i]) {
        ++sol_bad;
      }
    }
  }
  line("8.c", k_bad == 0, "K_i monotone on " + std::to_string(kEpistemicModels) + " random models: " + std::to_string(k_bad) + " violations");
  line("8.d", sol_bad == 0, "SOL_i = TT_i and PM_i against the loop oracle: " + std::to_string(sol_bad) + " mismatches");

  CorollarySweep c = choice_corollary_sweep(kCorollaryTrials, kCorollarySeed, kCorollaryActs);
  line("8.e", c.counterexamples == 0,
       "CC + IIA => IC over " + std::to_string(c.trials) + " universes (<= 4 acts): " + std::to_string(c.counterexamples) +
           " counterexamples in " + std::to_string(c.hypothesis_met) + " hypothesis-met trials");
  info("8.e'", "with C(O) inside X added: " + std::to_string(c.strengthened_counterexamples) + " counterexamples in " +
                   std::to_string(c.strengthened_met) + " trials");
  double t = seconds_since(t0);
  line("8.t", t < kExtensionSeconds, "runtime " + secs(t) + " < 120s");
}

}  // namespace

int main() {
  const std::function<void()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                            criterion5, criterion6, criterion7, criterion8};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      line("?", false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d failing line(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
