#pragma once

/**
 * @file synth_polya.hpp
 * @brief Lyapunov synthesis through Polya coefficient positivity.
 *
 * With P(y) = p(y^2), nonnegative coefficients of ||y||^{2d} P(y) make it a
 * sum of squares of monomials, hence P >= 0 on R^n and p >= 0 on the
 * orthant. For templates the coefficients are linear forms, so the
 * condition is a linear program.
 */

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "copolyap/lp.hpp"
#include "copolyap/synth_core.hpp"
#include "copolyap/synth_result.hpp"
#include "copolyap/verify.hpp"

namespace copolyap::polya {

struct PolyaOptions {
  int q_min = 1;
  int q_max = 6;
  int r_min = 1;
  int r_max = 2;
  int d_max = 8;
  double margin = 1e-6;
  std::size_t max_constraints = 20000;
  /// Among feasible h, prefer the largest smallest decrease coefficient.
  bool robust_objective = true;
  VerifyBudget verify_budget;
};

inline void validate(const PolyaOptions& o) {
  if (o.q_min < 1 || o.q_max < o.q_min) throw std::invalid_argument("polya: need 1 <= q_min <= q_max");
  if (o.r_min < 0 || o.r_max < o.r_min) throw std::invalid_argument("polya: need 0 <= r_min <= r_max");
  if (o.d_max < 0) throw std::invalid_argument("polya: d_max must be nonnegative");
  if (!(o.margin >= 0.0)) throw std::invalid_argument("polya: margin must be nonnegative");
}

/// ||y||^{2d} t(y). `t` is expected to be squares-substituted already; with
/// `excluded` the norm skips that variable (face polynomials).
inline CoefficientTemplate polya_lift(const CoefficientTemplate& t, int d, std::optional<int> excluded = std::nullopt) {
  return multiply_norm_power(t, d, excluded);
}

namespace detail {

/// Rows `coef(y^{2 alpha}) >= bound` for every alpha of total degree
/// deg/2 in the allowed variables; absent coefficients are zero.
inline void coefficient_rows(const CoefficientTemplate& p, std::optional<int> excluded, double bound,
                             LpProblem& lp, bool tau = false) {
  if (p.is_zero() && bound <= 0.0) return;
  if (bound <= 0.0) {
    for (const auto& [m, c] : p.terms()) {
      std::vector<double> row = c.coeffs();
      row.resize(lp.num_vars, 0.0);
      if (tau) row.back() = -1.0;
      lp.add_constraint(std::move(row), Relation::GreaterEqual, bound - c.constant());
    }
    return;
  }
  for (Monomial alpha : monomials_of_degree(p.nvars(), p.degree() / 2)) {
    if (excluded && alpha[*excluded] != 0) continue;
    for (int& e : alpha.exponents) e *= 2;
    const LinearForm c = p.coefficient(alpha);
    std::vector<double> row = c.coeffs();
    row.resize(lp.num_vars, 0.0);
    lp.add_constraint(std::move(row), Relation::GreaterEqual, bound - c.constant());
  }
}

}  // namespace detail

struct PolyaTemplates {
  int n = 0;
  int degree = 0;
  int r = 0;
  std::size_t num_vars = 0;
  CoefficientTemplate h;
  /// Squares-substituted h, s0 and face polynomials.
  CoefficientTemplate ph;
  CoefficientTemplate ps0;
  std::vector<CoefficientTemplate> pfaces;
};

inline PolyaTemplates build_templates(const ProblemSpec& problem, int degree, int r) {
  if (degree < 2 * r + 1) throw std::invalid_argument("polya: degree must be at least 2r+1");
  PolyaTemplates t;
  t.n = problem.dim();
  t.degree = degree;
  t.r = r;
  t.h = make_template(t.n, degree);
  t.num_vars = monomials_of_degree(t.n, degree).size();
  t.ph = substitute_squares(t.h);
  t.ps0 = substitute_squares(build_s0(t.h, problem.field(), r));
  for (int i = 0; i < t.n; ++i) t.pfaces.push_back(substitute_squares(build_s_face(t.h, problem.field(), r, i)));
  return t;
}

/// Lift-d LP: lifted h coefficients >= margin, lifted s coefficients >= 0,
/// sum of h coefficients = 1. With robust_objective a last variable tau is
/// subtracted from the s rows and maximized over [0, 1]; the feasible h are
/// unchanged.
inline LpProblem assemble_constraints(const PolyaTemplates& t, int d, double margin = 1e-6,
                                      bool robust_objective = false) {
  LpProblem lp;
  lp.num_vars = t.num_vars + (robust_objective ? 1 : 0);
  detail::coefficient_rows(polya_lift(t.ph, d), std::nullopt, margin, lp);
  detail::coefficient_rows(polya_lift(t.ps0, d), std::nullopt, 0.0, lp, robust_objective);
  for (int i = 0; i < t.n; ++i) {
    detail::coefficient_rows(polya_lift(t.pfaces[i], d, i), i, 0.0, lp, robust_objective);
  }
  std::vector<double> normalization(t.num_vars, 1.0);
  lp.add_constraint(std::move(normalization), Relation::Equal, 1.0);
  if (robust_objective) add_tau_bounds(lp);
  return lp;
}

/// Grid search over r, then degree q, then lift d; the first LP solution
/// that passes full verification is returned.
inline SynthesisResult synthesize(const ProblemSpec& problem, const PolyaOptions& opts = {}) {
  validate(opts);
  if (problem.dim() < 2) throw InvalidProblemError("polya: n must be at least 2");
  SynthesisResult result;
  for (int r = opts.r_min; r <= opts.r_max; ++r) {
    for (int q = std::max(opts.q_min, 2 * r + 1); q <= opts.q_max; ++q) {
      const PolyaTemplates t = build_templates(problem, q, r);
      for (int d = 0; d <= opts.d_max; ++d) {
        NodeRecord node;
        node.level = d;
        node.r = r;
        node.degree = q;
        const LpProblem lp = assemble_constraints(t, d, opts.margin, opts.robust_objective);
        node.num_constraints = lp.constraints.size();
        if (lp.constraints.size() > opts.max_constraints) {
          node.skipped = true;
          node.message = "constraint budget exceeded";
          result.nodes.push_back(std::move(node));
          break;  // larger lifts only grow
        }
        const LpOutcome out = solve(lp);
        node.lp_status = out.status;
        node.message = out.message;
        if (out.status != LpStatus::Feasible) {
          result.nodes.push_back(std::move(node));
          continue;
        }
        Certificate cert;
        cert.h = instantiate(t.h, out.solution);
        cert.r = r;
        cert.method = Method::Polya;
        cert.params = PolyaParams{d};
        cert.margin = opts.margin;
        cert.options = {{"q_min", opts.q_min}, {"q_max", opts.q_max}, {"r_min", opts.r_min},
                        {"r_max", opts.r_max}, {"d_max", opts.d_max}, {"margin", opts.margin}};
        cert.report = verify_full(problem, cert, opts.verify_budget);
        node.verification = cert.report->overall;
        result.nodes.push_back(std::move(node));
        if (cert.report->overall == CheckStatus::Certified) {
          result.certificate = std::move(cert);
          return result;
        }
      }
    }
  }
  return result;
}

}  // namespace copolyap::polya
