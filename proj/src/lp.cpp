#include "mechlab/lp.hpp"

#include <stdexcept>

namespace mechlab::lp {

std::size_t Problem::add_variable(VarKind kind, std::string name) {
  kinds_.push_back(kind);
  names_.push_back(std::move(name));
  cost_.emplace_back(0);
  return kinds_.size() - 1;
}

std::size_t Problem::add_constraint(std::vector<Term> terms, Sense sense, Rational rhs,
                                    std::string label) {
  for (const auto& t : terms) {
    if (t.var >= kinds_.size()) throw std::out_of_range("constraint references unknown variable");
  }
  rows_.push_back({std::move(terms), sense, std::move(rhs), std::move(label)});
  return rows_.size() - 1;
}

void Problem::set_objective(std::vector<Term> terms) {
  for (auto& c : cost_) c = 0;
  for (const auto& t : terms) cost_.at(t.var) += t.coef;
}

Rational Problem::row_value(std::size_t r, const std::vector<Rational>& x) const {
  Rational v = 0;
  for (const auto& t : rows_[r].terms) v += t.coef * x[t.var];
  return v;
}

Rational Problem::objective_value(const std::vector<Rational>& x) const {
  Rational v = 0;
  for (std::size_t j = 0; j < cost_.size(); ++j) v += cost_[j] * x[j];
  return v;
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t ncols)
      : m_(m), n_(ncols), a_(m, std::vector<Rational>(ncols + 1, Rational(0))),
        d_(ncols + 1, Rational(0)), basic_(m, 0) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][n_]; }
  std::vector<Rational>& cost_row() { return d_; }
  std::size_t& basic(std::size_t r) { return basic_[r]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<Rational>& pr = a_[r];
    Rational inv = 1 / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= n_; ++j) {
      if (pr[j] != 0) {
        pr[j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(a_[i]);
    }
    eliminate(d_);
    basic_[r] = c;
  }

  // Reprices the cost row for objective c over the current basis.
  void price(const std::vector<Rational>& c) {
    for (std::size_t j = 0; j < n_; ++j) d_[j] = c[j];
    d_[n_] = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = c[basic_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (a_[i][j] != 0) d_[j] -= cb * a_[i][j];
      }
    }
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule over columns c with allowed[c].
  Outcome run(const std::vector<bool>& allowed, std::size_t& pivots) {
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && d_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return Outcome::Optimal;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (a_[i][enter] <= 0) continue;
        Rational ratio = a_[i][n_] / a_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basic_[i] < basic_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return Outcome::Unbounded;
      pivot(leave, enter);
      ++pivots;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> d_;
  std::vector<std::size_t> basic_;
};

}  // namespace

Solution solve(const Problem& p) {
  const std::size_t nv = p.num_vars();
  const std::size_t m = p.num_constraints();
  const auto& rows = p.constraints();

  // Column layout: structural (free vars split), slacks, artificials.
  std::vector<std::size_t> plus_col(nv), minus_col(nv, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    plus_col[j] = ncols++;
    if (p.kinds()[j] == VarKind::Free) minus_col[j] = ncols++;
  }
  const std::size_t n_struct = ncols;
  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  std::vector<int> slack_sign(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].sense == Sense::Equal) continue;
    slack_col[r] = ncols++;
    slack_sign[r] = rows[r].sense == Sense::LessEq ? 1 : -1;
  }
  std::vector<int> flip(m, 1);
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].rhs < 0) flip[r] = -1;
  }
  std::vector<std::size_t> init_col(m);
  std::vector<bool> is_artificial;
  std::size_t first_art = ncols;
  for (std::size_t r = 0; r < m; ++r) {
    if (slack_col[r] != SIZE_MAX && slack_sign[r] * flip[r] == 1) {
      init_col[r] = slack_col[r];
    } else {
      init_col[r] = ncols++;
    }
  }
  is_artificial.assign(ncols, false);
  for (std::size_t c = first_art; c < ncols; ++c) is_artificial[c] = true;

  Tableau tab(m, ncols);
  for (std::size_t r = 0; r < m; ++r) {
    Rational f = flip[r];
    for (const auto& t : rows[r].terms) {
      tab.at(r, plus_col[t.var]) += f * t.coef;
      if (minus_col[t.var] != SIZE_MAX) tab.at(r, minus_col[t.var]) -= f * t.coef;
    }
    if (slack_col[r] != SIZE_MAX) tab.at(r, slack_col[r]) = f * slack_sign[r];
    if (is_artificial[init_col[r]]) tab.at(r, init_col[r]) = 1;
    tab.rhs(r) = f * rows[r].rhs;
    tab.basic(r) = init_col[r];
  }

  Solution sol;
  std::vector<bool> allowed(ncols);
  for (std::size_t c = 0; c < ncols; ++c) allowed[c] = !is_artificial[c];

  auto duals_from = [&](const std::vector<Rational>& cost) {
    std::vector<Rational> y(m);
    for (std::size_t r = 0; r < m; ++r) {
      Rational yhat = cost[init_col[r]] - tab.cost_row()[init_col[r]];
      y[r] = flip[r] * yhat;
    }
    return y;
  };

  if (first_art < ncols) {
    std::vector<Rational> c1(ncols, Rational(0));
    for (std::size_t c = first_art; c < ncols; ++c) c1[c] = 1;
    tab.price(c1);
    tab.run(allowed, sol.pivots);
    Rational infeas = -tab.cost_row()[ncols];
    if (infeas > 0) {
      sol.status = Status::Infeasible;
      sol.dual = duals_from(c1);
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_artificial[tab.basic(r)]) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (tab.at(r, c) != 0) {
          tab.pivot(r, c);
          ++sol.pivots;
          break;
        }
      }
    }
  }

  std::vector<Rational> c2(ncols, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) {
    c2[plus_col[j]] = p.objective()[j];
    if (minus_col[j] != SIZE_MAX) c2[minus_col[j]] = -p.objective()[j];
  }
  tab.price(c2);
  if (tab.run(allowed, sol.pivots) == Tableau::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  std::vector<Rational> colval(ncols, Rational(0));
  for (std::size_t r = 0; r < m; ++r) colval[tab.basic(r)] = tab.rhs(r);
  sol.x.assign(nv, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) {
    sol.x[j] = colval[plus_col[j]];
    if (minus_col[j] != SIZE_MAX) sol.x[j] -= colval[minus_col[j]];
  }
  (void)n_struct;
  sol.status = Status::Optimal;
  sol.dual = duals_from(c2);
  sol.objective = p.objective_value(sol.x);
  return sol;
}

bool is_feasible_point(const Problem& p, const std::vector<Rational>& x) {
  if (x.size() != p.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (p.kinds()[j] == VarKind::NonNegative && x[j] < 0) return false;
  }
  for (std::size_t r = 0; r < p.num_constraints(); ++r) {
    Rational v = p.row_value(r, x);
    const Constraint& c = p.constraints()[r];
    switch (c.sense) {
      case Sense::LessEq:
        if (v > c.rhs) return false;
        break;
      case Sense::GreaterEq:
        if (v < c.rhs) return false;
        break;
      case Sense::Equal:
        if (v != c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

bool signs_ok(const Problem& p, const std::vector<Rational>& y) {
  if (y.size() != p.num_constraints()) return false;
  for (std::size_t r = 0; r < y.size(); ++r) {
    Sense s = p.constraints()[r].sense;
    if (s == Sense::GreaterEq && y[r] < 0) return false;
    if (s == Sense::LessEq && y[r] > 0) return false;
  }
  return true;
}

std::vector<Rational> transpose_times(const Problem& p, const std::vector<Rational>& y) {
  std::vector<Rational> g(p.num_vars(), Rational(0));
  for (std::size_t r = 0; r < p.num_constraints(); ++r) {
    if (y[r] == 0) continue;
    for (const auto& t : p.constraints()[r].terms) g[t.var] += y[r] * t.coef;
  }
  return g;
}

Rational rhs_dot(const Problem& p, const std::vector<Rational>& y) {
  Rational v = 0;
  for (std::size_t r = 0; r < p.num_constraints(); ++r) v += y[r] * p.constraints()[r].rhs;
  return v;
}

}  // namespace

bool verify_infeasibility(const Problem& p, const std::vector<Rational>& y) {
  if (!signs_ok(p, y)) return false;
  std::vector<Rational> g = transpose_times(p, y);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (p.kinds()[j] == VarKind::Free ? g[j] != 0 : g[j] > 0) return false;
  }
  return rhs_dot(p, y) > 0;
}

bool is_dual_feasible(const Problem& p, const std::vector<Rational>& y) {
  if (!signs_ok(p, y)) return false;
  std::vector<Rational> g = transpose_times(p, y);
  for (std::size_t j = 0; j < g.size(); ++j) {
    Rational reduced = p.objective()[j] - g[j];
    if (p.kinds()[j] == VarKind::Free ? reduced != 0 : reduced < 0) return false;
  }
  return true;
}

Rational dual_bound(const Problem& p, const std::vector<Rational>& y) { return rhs_dot(p, y); }

bool verify_optimality(const Problem& p, const std::vector<Rational>& x,
                       const std::vector<Rational>& y) {
  return is_feasible_point(p, x) && is_dual_feasible(p, y) &&
         p.objective_value(x) == rhs_dot(p, y);
}

}  // namespace mechlab::lp
