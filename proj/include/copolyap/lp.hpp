#pragma once

/**
 * @file lp.hpp
 * @brief Dense two-phase primal simplex with Bland's rule.
 *
 * Problems have sign-unrestricted variables, linear `>=` and `=` rows and a
 * minimized objective (empty objective means pure feasibility). Variables
 * are split as x = u - w internally. Every reported solution is checked
 * against the original rows; a violation beyond the feasibility tolerance
 * is reported as NumericalFailure rather than returned.
 */

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace copolyap {

enum class Relation { GreaterEqual, Equal };

struct LpConstraint {
  std::vector<double> row;
  Relation relation = Relation::GreaterEqual;
  double rhs = 0.0;
};

struct LpProblem {
  std::size_t num_vars = 0;
  /// Minimized. Empty or all-zero for a feasibility problem.
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;

  void add_constraint(std::vector<double> row, Relation relation, double rhs) {
    row.resize(num_vars, 0.0);
    constraints.push_back({std::move(row), relation, rhs});
  }
};

/// For a problem whose last variable is a slack tau: adds 0 <= tau <= 1 and
/// sets the objective to maximize tau.
inline void add_tau_bounds(LpProblem& p) {
  const std::size_t tau = p.num_vars - 1;
  std::vector<double> lower(p.num_vars, 0.0);
  lower[tau] = 1.0;
  p.add_constraint(lower, Relation::GreaterEqual, 0.0);
  std::vector<double> upper(p.num_vars, 0.0);
  upper[tau] = -1.0;
  p.add_constraint(std::move(upper), Relation::GreaterEqual, -1.0);
  p.objective.assign(p.num_vars, 0.0);
  p.objective[tau] = -1.0;
}

enum class LpStatus { Feasible, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct LpOutcome {
  LpStatus status = LpStatus::NumericalFailure;
  Eigen::VectorXd solution;
  double objective_value = 0.0;
  int iterations = 0;
  std::string message;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  /// Post-solve acceptance of constraint residuals (absolute).
  double feasibility_tolerance = 1e-7;
  /// Phase-one optimum above this means infeasible.
  double infeasibility_threshold = 1e-9;
  int max_iterations = 0;  // 0: derived from the problem size
};

namespace detail {

class SimplexTableau {
 public:
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SimplexTableau(const LpProblem& p, const LpOptions& opts) : opts_(opts) {
    n_ = static_cast<int>(p.num_vars);
    m_ = static_cast<int>(p.constraints.size());
    int num_slack = 0;
    int num_art = 0;
    for (const auto& c : p.constraints) {
      if (c.relation == Relation::GreaterEqual) ++num_slack;
      if (c.relation == Relation::Equal || c.rhs > 0.0) ++num_art;
    }
    slack0_ = 2 * n_;
    art0_ = slack0_ + num_slack;
    cols_ = art0_ + num_art;
    t_ = RowMajor::Zero(m_ + 1, cols_ + 1);  // last row: reduced costs
    basis_.assign(m_, -1);

    int slack = slack0_;
    int art = art0_;
    for (int i = 0; i < m_; ++i) {
      const LpConstraint& c = p.constraints[i];
      double scale = 0.0;
      for (double a : c.row) scale = std::max(scale, std::abs(a));
      scale = scale > 0.0 ? 1.0 / scale : 1.0;
      double sign = 1.0;
      const bool needs_art = c.relation == Relation::Equal || c.rhs > 0.0;
      if (c.relation == Relation::GreaterEqual && !needs_art) sign = -1.0;  // -a x + s = -b >= 0
      if (c.relation == Relation::Equal && c.rhs < 0.0) sign = -1.0;
      const double f = sign * scale;
      for (int j = 0; j < n_; ++j) {
        t_(i, j) = f * c.row[j];
        t_(i, n_ + j) = -f * c.row[j];
      }
      t_(i, cols_) = f * c.rhs;
      if (c.relation == Relation::GreaterEqual) {
        t_(i, slack) = -sign;
        if (!needs_art) basis_[i] = slack;
        ++slack;
      }
      if (needs_art) {
        t_(i, art) = 1.0;
        basis_[i] = art;
        ++art;
      }
    }
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 50 * (m_ + cols_) + 1000;
  }

  LpOutcome run(const LpProblem& p) {
    LpOutcome out;
    // Phase one: minimize the sum of artificials.
    std::vector<double> cost(cols_, 0.0);
    for (int j = art0_; j < cols_; ++j) cost[j] = 1.0;
    set_costs(cost);
    allowed_ = cols_;
    LpStatus st = iterate(out.iterations);
    if (st != LpStatus::Feasible) {
      out.status = LpStatus::NumericalFailure;
      out.message = "phase one did not converge";
      return out;
    }
    if (-t_(m_, cols_) > opts_.infeasibility_threshold) {
      out.status = LpStatus::Infeasible;
      out.message = "phase one optimum " + std::to_string(-t_(m_, cols_));
      return out;
    }
    drive_out_artificials();

    // Phase two on the original objective, artificials barred.
    std::fill(cost.begin(), cost.end(), 0.0);
    for (int j = 0; j < n_ && j < static_cast<int>(p.objective.size()); ++j) {
      cost[j] = p.objective[j];
      cost[n_ + j] = -p.objective[j];
    }
    set_costs(cost);
    allowed_ = art0_;
    st = iterate(out.iterations);
    if (st == LpStatus::Unbounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    if (st != LpStatus::Feasible) {
      out.status = LpStatus::NumericalFailure;
      out.message = "phase two did not converge";
      return out;
    }
    out.solution = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (b < n_) out.solution[b] += t_(i, cols_);
      else if (b < 2 * n_) out.solution[b - n_] -= t_(i, cols_);
    }
    out.objective_value = 0.0;
    for (int j = 0; j < n_ && j < static_cast<int>(p.objective.size()); ++j) {
      out.objective_value += p.objective[j] * out.solution[j];
    }
    out.status = LpStatus::Feasible;
    return out;
  }

 private:
  void set_costs(const std::vector<double>& cost) {
    for (int j = 0; j < cols_; ++j) t_(m_, j) = cost[j];
    t_(m_, cols_) = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(r);
        t_(i, c) = 0.0;
      }
    }
    basis_[r] = c;
  }

  /// Bland's rule: lowest-index improving column, ratio ties to the lowest
  /// basic index.
  LpStatus iterate(int& iterations) {
    const double cost_tol = opts_.pivot_tolerance;
    while (true) {
      if (iterations >= max_iter_) return LpStatus::NumericalFailure;
      int enter = -1;
      for (int j = 0; j < allowed_; ++j) {
        if (t_(m_, j) < -cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Feasible;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= opts_.pivot_tolerance) continue;
        const double ratio = std::max(t_(i, cols_), 0.0) / a;
        if (leave < 0 || ratio < best - 1e-12 * (1.0 + best) ||
            (std::abs(ratio - best) <= 1e-12 * (1.0 + best) && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art0_) continue;
      int best = -1;
      double best_abs = opts_.pivot_tolerance;
      for (int j = 0; j < art0_; ++j) {
        if (std::abs(t_(i, j)) > best_abs) {
          best_abs = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
      // Otherwise the row is redundant; its artificial stays basic at zero.
    }
  }

  LpOptions opts_;
  int n_ = 0;
  int m_ = 0;
  int cols_ = 0;
  int slack0_ = 0;
  int art0_ = 0;
  int allowed_ = 0;
  int max_iter_ = 0;
  RowMajor t_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpOutcome solve(const LpProblem& p, const LpOptions& opts = {}) {
  for (const auto& c : p.constraints) {
    if (c.row.size() != p.num_vars) {
      LpOutcome bad;
      bad.status = LpStatus::NumericalFailure;
      bad.message = "constraint row length does not match num_vars";
      return bad;
    }
    for (double a : c.row) {
      if (!std::isfinite(a)) {
        LpOutcome bad;
        bad.message = "non-finite constraint data";
        return bad;
      }
    }
    if (!std::isfinite(c.rhs)) {
      LpOutcome bad;
      bad.message = "non-finite constraint data";
      return bad;
    }
  }
  if (p.num_vars == 0 || p.constraints.empty()) {
    LpOutcome out;
    out.solution = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.num_vars));
    out.status = LpStatus::Feasible;
    for (const auto& c : p.constraints) {
      const bool ok = c.relation == Relation::Equal ? std::abs(c.rhs) <= opts.feasibility_tolerance
                                                    : c.rhs <= opts.feasibility_tolerance;
      if (!ok) out.status = LpStatus::Infeasible;
    }
    if (p.num_vars > 0 && !p.objective.empty()) {
      for (double c : p.objective) {
        if (c != 0.0) out.status = LpStatus::Unbounded;
      }
    }
    return out;
  }

  detail::SimplexTableau tableau(p, opts);
  LpOutcome out = tableau.run(p);
  if (out.status != LpStatus::Feasible) return out;

  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& c = p.constraints[k];
    double lhs = 0.0;
    for (std::size_t j = 0; j < p.num_vars; ++j) lhs += c.row[j] * out.solution[static_cast<Eigen::Index>(j)];
    const double residual = c.relation == Relation::Equal ? std::abs(lhs - c.rhs) : std::max(c.rhs - lhs, 0.0);
    if (residual > opts.feasibility_tolerance) {
      out.status = LpStatus::NumericalFailure;
      out.message = "constraint " + std::to_string(k) + " violated by " + std::to_string(residual);
      return out;
    }
  }
  return out;
}

}  // namespace copolyap
