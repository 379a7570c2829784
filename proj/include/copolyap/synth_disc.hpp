#pragma once

/**
 * @file synth_disc.hpp
 * @brief Lyapunov synthesis by simplicial discretization.
 *
 * For a template h and partition {S_k} of the standard simplex, every
 * multiset of deg-many vertices of S_k yields one linear constraint on the
 * template coefficients: the polar form evaluated at that tuple must be
 * nonnegative (>= margin for h). Nonnegative tuples on a simplex imply the
 * polynomial is nonnegative there, so any feasible point is a certificate.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "copolyap/lp.hpp"
#include "copolyap/parallel.hpp"
#include "copolyap/simplex.hpp"
#include "copolyap/synth_core.hpp"
#include "copolyap/synth_result.hpp"
#include "copolyap/verify.hpp"

namespace copolyap::disc {

struct DiscOptions {
  int d_min = 1;
  int d_max = 6;
  int r_min = 0;
  int r_max = 2;
  /// Smallest nominal partition diameter; a power of two in (0, 1].
  double delta_min = 1.0 / 64.0;
  double margin = 1e-6;
  FaceMode mode = FaceMode::Conservative;
  /// Nodes whose LP would exceed this many rows are skipped.
  std::size_t max_constraints = 20000;
  /// Among feasible h, prefer the largest smallest decrease value.
  bool robust_objective = true;
  VerifyBudget verify_budget;
};

inline void validate(const DiscOptions& o) {
  if (o.d_min < 1 || o.d_max < o.d_min) throw std::invalid_argument("disc: need 1 <= d_min <= d_max");
  if (o.r_min < 0 || o.r_max < o.r_min) throw std::invalid_argument("disc: need 0 <= r_min <= r_max");
  int exp = 0;
  const double mant = std::frexp(o.delta_min, &exp);
  if (!(o.delta_min > 0.0 && o.delta_min <= 1.0) || mant != 0.5) {
    throw std::invalid_argument("disc: delta_min must be 2^-k for an integer k >= 0");
  }
  if (!(o.margin >= 0.0)) throw std::invalid_argument("disc: margin must be nonnegative");
}

/// Number of refinement levels with nominal diameter >= delta_min.
inline int max_level(const DiscOptions& o) {
  int exp = 0;
  std::frexp(o.delta_min, &exp);
  return 1 - exp;
}

struct DiscTemplates {
  int n = 0;
  int degree = 0;
  int r = 0;
  std::size_t num_vars = 0;
  CoefficientTemplate h;
  CoefficientTemplate s0;
  std::vector<CoefficientTemplate> faces;
  /// Restriction of f_i to face i; selects the multiplier branch in
  /// sign_split mode.
  std::vector<Poly> face_field;
  int field_degree = 1;
  FaceMode mode = FaceMode::Conservative;
};

inline DiscTemplates build_templates(const ProblemSpec& problem, int degree, int r,
                                     FaceMode mode = FaceMode::Conservative) {
  if (degree < 2 * r + 1) throw std::invalid_argument("disc: degree must be at least 2r+1");
  DiscTemplates t{problem.dim(), degree, r, 0, make_template(problem.dim(), degree), {}, {}, {}, problem.field_degree(),
                  mode};
  t.num_vars = monomials_of_degree(t.n, degree).size();
  t.s0 = build_s0(t.h, problem.field(), r);
  for (int i = 0; i < t.n; ++i) {
    t.faces.push_back(build_s_face(t.h, problem.field(), r, i));
    t.face_field.push_back(restrict_to_face(problem.field()[i], i));
  }
  return t;
}

namespace detail {

/// Stable identifiers for partition vertices so that tuples shared by
/// adjacent simplices produce one row.
class VertexIndex {
 public:
  int id(const Vector& v) {
    std::vector<long long> key(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) key[j] = std::llround(v[j] * 1e12);
    auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::map<std::vector<long long>, int> ids_;
};

struct TupleRow {
  std::vector<int> key;  // [polynomial tag, sorted vertex ids...]
  LinearForm value;
  double bound = 0.0;
};

/// One row per vertex multiset of `s`; absent multisets have value zero.
inline void tuple_rows(const CoefficientTemplate& t, const std::vector<int>& vertex_ids, const Simplex& s, int tag,
                       double bound, std::vector<TupleRow>& out) {
  if (t.is_zero() && bound <= 0.0) return;
  const auto values = polar_values(t, s.vertices(), t.degree());
  for (const Monomial& beta : monomials_of_degree(s.num_vertices(), t.degree())) {
    TupleRow row;
    row.key.push_back(tag);
    for (int k = 0; k < s.num_vertices(); ++k) row.key.insert(row.key.end(), beta[k], vertex_ids[k]);
    std::sort(row.key.begin() + 1, row.key.end());
    const auto it = values.find(beta);
    if (it != values.end()) row.value = it->second;
    row.bound = bound;
    out.push_back(std::move(row));
  }
}

inline bool uniformly_nonnegative(const Poly& p, int degree, const Simplex& s) {
  if (p.is_zero()) return true;
  const double tol = sign_tolerance(p);
  for (const auto& [beta, v] : polar_values(p, s.vertices(), degree)) {
    if (v < -tol) return false;
  }
  return true;
}

inline bool mixed_vertex_signs(const Poly& p, const Simplex& s) {
  bool pos = false;
  bool neg = false;
  for (const Vector& v : s.vertices()) {
    const double val = p(v);
    pos = pos || val > 0.0;
    neg = neg || val < 0.0;
  }
  return pos && neg;
}

/// Face pieces where the s_i constraint applies. In sign_split mode pieces
/// on which f_i is certified nonnegative are dropped (there the multiplier
/// vanishes and s0 on the closed simplex already governs), after refining
/// pieces with mixed vertex signs a few extra levels.
inline std::vector<Simplex> face_pieces(const DiscTemplates& t, int i, int level) {
  const SimplicialPartition base = partition_at_level(face_simplex(t.n, i), level);
  if (t.mode == FaceMode::Conservative) return base.simplices;
  constexpr int kExtraLevels = 6;
  const Poly& fi = t.face_field[i];
  std::vector<Simplex> out;
  std::vector<std::pair<Simplex, int>> stack;
  for (const Simplex& s : base.simplices) stack.emplace_back(s, 0);
  while (!stack.empty()) {
    auto [s, extra] = std::move(stack.back());
    stack.pop_back();
    if (uniformly_nonnegative(fi, t.field_degree, s)) continue;
    if (extra < kExtraLevels && s.num_vertices() >= 2 && mixed_vertex_signs(fi, s)) {
      auto [a, b] = bisect(s);
      stack.emplace_back(std::move(b), extra + 1);
      stack.emplace_back(std::move(a), extra + 1);
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// With robust_objective an extra variable tau (last) is subtracted from
/// every decrease row and maximized over [0, 1]. The feasible h are the
/// same; the solver just prefers the one with the largest decrease.
inline LpProblem assemble(const DiscTemplates& t, const SimplicialPartition& partition, double margin,
                          bool robust_objective) {
  if (partition.simplices.empty()) throw std::invalid_argument("assemble_constraints: empty partition");
  if (partition.simplices.front().ambient_dim() != t.n) {
    throw DimensionError("assemble_constraints: partition dimension does not match the templates");
  }
  VertexIndex index;
  struct Piece {
    const CoefficientTemplate* poly;
    int tag;
    double bound;
    Simplex simplex;
    std::vector<int> ids;
  };
  std::vector<Piece> pieces;
  auto add_piece = [&](const CoefficientTemplate& p, int tag, double bound, const Simplex& s) {
    std::vector<int> ids;
    for (const Vector& v : s.vertices()) ids.push_back(index.id(v));
    pieces.push_back({&p, tag, bound, s, std::move(ids)});
  };
  for (const Simplex& s : partition.simplices) {
    add_piece(t.h, 0, margin, s);
    add_piece(t.s0, 1, 0.0, s);
  }
  for (int i = 0; i < t.n; ++i) {
    for (const Simplex& s : face_pieces(t, i, partition.level)) add_piece(t.faces[i], 2 + i, 0.0, s);
  }

  std::vector<std::vector<detail::TupleRow>> rows(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    const Piece& pc = pieces[k];
    detail::tuple_rows(*pc.poly, pc.ids, pc.simplex, pc.tag, pc.bound, rows[k]);
  });

  LpProblem lp;
  lp.num_vars = t.num_vars + (robust_objective ? 1 : 0);
  std::map<std::vector<int>, bool> seen;
  for (auto& chunk : rows) {
    for (auto& row : chunk) {
      if (!seen.emplace(row.key, true).second) continue;
      std::vector<double> coeffs = row.value.coeffs();
      coeffs.resize(lp.num_vars, 0.0);
      const double rhs = row.bound - row.value.constant();
      if (std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; }) && rhs <= 0.0) continue;
      if (robust_objective && row.key.front() >= 1) coeffs.back() = -1.0;
      lp.add_constraint(std::move(coeffs), Relation::GreaterEqual, rhs);
    }
  }
  std::vector<double> normalization(t.num_vars, 1.0);
  lp.add_constraint(std::move(normalization), Relation::Equal, 1.0);
  if (robust_objective) add_tau_bounds(lp);
  return lp;
}

}  // namespace detail

/// Tuple constraints of h (>= margin), s0 and every face s_i (>= 0) on the
/// partition, the induced face partitions at the same level, and the
/// normalization sum of h coefficients = 1.
inline LpProblem assemble_constraints(const DiscTemplates& t, const SimplicialPartition& partition,
                                      double margin = 1e-6) {
  return detail::assemble(t, partition, margin, false);
}


/// Grid search: nominal diameter 1, 1/2, ... down to delta_min, then r,
/// then degree. Returns the first LP solution that also passes full
/// verification.
inline SynthesisResult synthesize(const ProblemSpec& problem, const DiscOptions& opts = {}) {
  validate(opts);
  const int n = problem.dim();
  if (n < 2) throw InvalidProblemError("disc: n must be at least 2");
  SynthesisResult result;
  SimplicialPartition partition = initial_partition(standard_simplex(n));
  const int levels = max_level(opts);
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) partition = refine_all(partition);
    for (int r = opts.r_min; r <= opts.r_max; ++r) {
      for (int degree = std::max(opts.d_min, 2 * r + 1); degree <= opts.d_max; ++degree) {
        NodeRecord node;
        node.level = level;
        node.r = r;
        node.degree = degree;
        const DiscTemplates t = build_templates(problem, degree, r, opts.mode);
        const LpProblem lp = detail::assemble(t, partition, opts.margin, opts.robust_objective);
        node.num_constraints = lp.constraints.size();
        if (lp.constraints.size() > opts.max_constraints) {
          node.skipped = true;
          node.message = "constraint budget exceeded";
          result.nodes.push_back(std::move(node));
          continue;
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
        cert.method = Method::Disc;
        cert.params = DiscParams{level, partition.nominal_delta(), diameter(partition), opts.mode};
        cert.margin = opts.margin;
        cert.options = {{"d_min", opts.d_min},     {"d_max", opts.d_max},   {"r_min", opts.r_min},
                        {"r_max", opts.r_max},     {"delta_min", opts.delta_min},
                        {"margin", opts.margin}};
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

}  // namespace copolyap::disc
