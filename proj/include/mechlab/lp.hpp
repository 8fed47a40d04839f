#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mechlab/rational.hpp"

// Exact rational linear programming: dense two-phase simplex with Bland's rule.
namespace mechlab::lp {

enum class Sense { LessEq, GreaterEq, Equal };
enum class VarKind { NonNegative, Free };
enum class Status { Optimal, Infeasible, Unbounded };

struct Term {
  std::size_t var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::GreaterEq;
  Rational rhs;
  std::string label;
};

// minimize c.x subject to the constraints; an empty objective is a pure
// feasibility problem.
class Problem {
 public:
  std::size_t add_variable(VarKind kind, std::string name = {});
  std::size_t add_constraint(std::vector<Term> terms, Sense sense, Rational rhs,
                             std::string label = {});
  void set_objective(std::vector<Term> terms);

  std::size_t num_vars() const { return kinds_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const std::vector<VarKind>& kinds() const { return kinds_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<Rational>& objective() const { return cost_; }

  Rational row_value(std::size_t r, const std::vector<Rational>& x) const;
  Rational objective_value(const std::vector<Rational>& x) const;

 private:
  std::vector<VarKind> kinds_;
  std::vector<std::string> names_;
  std::vector<Constraint> rows_;
  std::vector<Rational> cost_;
};

// Dual multipliers use one sign convention throughout: y_r >= 0 on >= rows,
// y_r <= 0 on <= rows, free on equality rows.
struct Solution {
  Status status = Status::Infeasible;
  std::vector<Rational> x;       // primal point when Optimal
  std::vector<Rational> dual;    // optimal duals when Optimal, Farkas ray when Infeasible
  Rational objective;
  std::size_t pivots = 0;
};

Solution solve(const Problem& p);

bool is_feasible_point(const Problem& p, const std::vector<Rational>& x);
// y proves infeasibility: sign-feasible, A^T y = 0 on free vars, <= 0 on
// nonnegative vars, and b.y > 0.
bool verify_infeasibility(const Problem& p, const std::vector<Rational>& y);
// y is dual feasible and its bound b.y equals c.x for a feasible x.
bool verify_optimality(const Problem& p, const std::vector<Rational>& x,
                       const std::vector<Rational>& y);
// b.y for a sign-feasible y with A^T y matching c; a certified lower bound.
Rational dual_bound(const Problem& p, const std::vector<Rational>& y);
bool is_dual_feasible(const Problem& p, const std::vector<Rational>& y);

}  // namespace mechlab::lp
