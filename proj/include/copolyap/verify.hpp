#pragma once

/**
 * @file verify.hpp
 * @brief Copositivity certification and Lyapunov-condition checking.
 *
 * Two constructive checkers:
 *  - tensor: on a simplicial partition of the standard simplex, nonnegative
 *    polar-form values at every vertex multiset certify p >= 0 on each
 *    piece; a negative vertex value falsifies. Uncertified pieces are
 *    bisected until the level budget runs out.
 *  - Polya: all coefficients of ||y||^{2d} p(y^2) nonnegative certify
 *    p >= 0 on the orthant. One-sided: it never falsifies.
 *
 * Sampling with the exact multiplier only corroborates or falsifies.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "copolyap/comp.hpp"
#include "copolyap/parallel.hpp"
#include "copolyap/poly.hpp"
#include "copolyap/report.hpp"
#include "copolyap/simplex.hpp"
#include "copolyap/synth_core.hpp"

namespace copolyap {

struct VerifyBudget {
  int max_level = 8;
  int polya_d_max = 8;
  std::size_t num_samples = 2000;
  std::uint64_t seed = 0;
  double sample_tolerance = 1e-8;
};

/// Absolute tolerance for sign decisions on p: 1e-10 relative to the
/// coefficient scale, never below 1e-10.
inline double sign_tolerance(const Poly& p) { return 1e-10 * std::max(1.0, max_abs_coefficient(p)); }

namespace detail {

struct PieceEvaluation {
  bool nonnegative = true;
  int worst_vertex = -1;
  double worst_vertex_value = 0.0;
};

/// Polar values of p on one simplex; vertex values are the pure multisets.
inline PieceEvaluation evaluate_piece(const Poly& p, int degree, const Simplex& s, double tol) {
  PieceEvaluation ev;
  const auto values = polar_values(p, s.vertices(), degree);
  for (const auto& [beta, v] : values) {
    if (v < -tol) ev.nonnegative = false;
  }
  for (int k = 0; k < s.num_vertices(); ++k) {
    const double pv = p(s.vertices()[k]);
    if (pv < -tol && (ev.worst_vertex < 0 || pv < ev.worst_vertex_value)) {
      ev.worst_vertex = k;
      ev.worst_vertex_value = pv;
    }
  }
  return ev;
}

inline Simplex root_simplex(int n, std::optional<int> face) {
  return face ? face_simplex(n, *face) : standard_simplex(n);
}

}  // namespace detail

/// Tensor (simplicial partition) copositivity check on the standard simplex,
/// or on the face x_face = 0 when `face` is given.
inline CheckResult check_copositive_tensor(const Poly& p, int max_level = 8, std::optional<int> face = std::nullopt) {
  const auto hom = check_homogeneous(p);
  if (!hom) throw std::invalid_argument("check_copositive_tensor: polynomial is not homogeneous");
  CheckResult res;
  res.method = "tensor";
  if (p.is_zero()) {
    res.status = CheckStatus::Certified;
    return res;
  }
  const int degree = *hom.degree;
  const double tol = sign_tolerance(p);
  std::vector<Simplex> pending{detail::root_simplex(p.nvars(), face)};
  for (int level = 0;; ++level) {
    std::vector<detail::PieceEvaluation> evals(pending.size());
    for (std::size_t k = 0; k < pending.size(); ++k) evals[k] = detail::evaluate_piece(p, degree, pending[k], tol);

    std::vector<Simplex> next;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const auto& ev = evals[k];
      if (ev.worst_vertex >= 0 && (!res.witness || ev.worst_vertex_value < res.witness_value)) {
        res.witness = pending[k].vertices()[ev.worst_vertex];
        res.witness_value = ev.worst_vertex_value;
      }
      if (!ev.nonnegative) next.push_back(pending[k]);
    }
    res.param = level;
    if (res.witness) {
      res.status = CheckStatus::Falsified;
      return res;
    }
    if (next.empty()) {
      res.status = CheckStatus::Certified;
      return res;
    }
    if (level >= max_level) {
      res.status = CheckStatus::Unknown;
      return res;
    }
    pending.clear();
    for (const Simplex& s : next) {
      if (s.num_vertices() < 2) continue;
      for (Simplex& piece : refine_simplex(s, 0.5 * s.diameter())) pending.push_back(std::move(piece));
    }
    if (pending.empty()) {
      res.status = CheckStatus::Unknown;
      return res;
    }
  }
}

/// Smallest d <= d_max with ||y||^{2d} p(y^2) coefficientwise nonnegative.
inline CheckResult check_copositive_polya(const Poly& p, int d_max = 8, std::optional<int> face = std::nullopt) {
  const auto hom = check_homogeneous(p);
  if (!hom) throw std::invalid_argument("check_copositive_polya: polynomial is not homogeneous");
  CheckResult res;
  res.method = "polya";
  Poly lifted = substitute_squares(p);
  const Poly step = norm_squared_power(p.nvars(), 1, face);
  for (int d = 0; d <= d_max; ++d) {
    if (d > 0) lifted = lifted * step;
    const double tol = sign_tolerance(lifted);
    bool ok = true;
    for (const auto& [m, c] : lifted.terms()) {
      if (c < -tol) {
        ok = false;
        break;
      }
    }
    if (ok) {
      res.status = CheckStatus::Certified;
      res.param = d;
      return res;
    }
  }
  res.status = CheckStatus::Unknown;
  res.param = d_max;
  return res;
}

/// Runs both checkers and combines them.
inline PolynomialVerdict verify_polynomial(std::string name, const Poly& p, const VerifyBudget& budget,
                                           std::optional<int> face = std::nullopt) {
  PolynomialVerdict v;
  v.name = std::move(name);
  v.tensor = check_copositive_tensor(p, budget.max_level, face);
  v.polya = check_copositive_polya(p, budget.polya_d_max, face);
  if (v.tensor.status == CheckStatus::Certified) {
    v.combined = v.tensor;
  } else if (v.polya.status == CheckStatus::Certified) {
    v.combined = v.polya;
  } else {
    v.combined = v.tensor;
  }
  return v;
}

/// Piecewise face check using the branch of the multiplier that actually
/// applies: where f_i >= 0 is certified on a piece of the face the true
/// multiplier vanishes and the decrease is governed by s0 (checked on the
/// closed simplex), elsewhere the s_i polynomial with eta = -f_i e_i.
inline CheckResult check_face_sign_split(const ProblemSpec& problem, const Poly& s_face, int face, int max_level) {
  const int n = problem.dim();
  const Poly fi = restrict_to_face(problem.field()[face], face);
  CheckResult res;
  res.method = "tensor_sign_split";
  const double tol_s = sign_tolerance(s_face);
  const double tol_f = sign_tolerance(fi);
  const int s_degree = s_face.degree();
  const int f_degree = problem.field_degree();
  std::vector<Simplex> pending{face_simplex(n, face)};
  for (int level = 0;; ++level) {
    std::vector<Simplex> next;
    for (const Simplex& s : pending) {
      if (fi.is_zero() || detail::evaluate_piece(fi, f_degree, s, tol_f).nonnegative) continue;
      if (s_face.is_zero() || detail::evaluate_piece(s_face, s_degree, s, tol_s).nonnegative) continue;
      for (const Vector& v : s.vertices()) {
        const double sv = s_face(v);
        if (fi(v) <= 0.0 && sv < -tol_s && (!res.witness || sv < res.witness_value)) {
          res.witness = v;
          res.witness_value = sv;
        }
      }
      next.push_back(s);
    }
    res.param = level;
    if (res.witness) {
      res.status = CheckStatus::Falsified;
      return res;
    }
    if (next.empty()) {
      res.status = CheckStatus::Certified;
      return res;
    }
    if (level >= max_level) {
      res.status = CheckStatus::Unknown;
      return res;
    }
    pending.clear();
    for (const Simplex& s : next) {
      if (s.num_vertices() < 2) continue;
      for (Simplex& piece : refine_simplex(s, 0.5 * s.diameter())) pending.push_back(std::move(piece));
    }
    if (pending.empty()) {
      res.status = CheckStatus::Unknown;
      return res;
    }
  }
}

inline CheckStatus aggregate(const VerificationReport& r) {
  bool all_certified = true;
  bool any_falsified = false;
  auto visit = [&](const PolynomialVerdict& v) {
    if (v.combined.status != CheckStatus::Certified) all_certified = false;
    if (v.combined.status == CheckStatus::Falsified) any_falsified = true;
  };
  visit(r.h);
  visit(r.s0);
  for (const auto& f : r.faces) visit(f);
  if (r.sampling && r.sampling->violation) any_falsified = true;
  if (any_falsified) return CheckStatus::Falsified;
  return all_certified ? CheckStatus::Certified : CheckStatus::Unknown;
}

/// Rebuilds s0 and every face polynomial from the certificate's h and
/// certifies h, s0 and each s_i.
inline VerificationReport verify_certificate(const ProblemSpec& problem, const Certificate& cert,
                                             const VerifyBudget& budget = {}) {
  validate_certificate(cert, problem.dim());
  const int n = problem.dim();
  if (n < 2) throw InvalidProblemError("verification needs n >= 2");
  std::vector<Poly> polys;
  polys.push_back(cert.h);
  polys.push_back(build_s0(cert.h, problem.field(), cert.r));
  for (int i = 0; i < n; ++i) polys.push_back(build_s_face(cert.h, problem.field(), cert.r, i));

  std::vector<PolynomialVerdict> verdicts(polys.size());
  parallel_for(polys.size(), [&](std::size_t k) {
    if (k == 0) {
      verdicts[k] = verify_polynomial("h", polys[k], budget);
    } else if (k == 1) {
      verdicts[k] = verify_polynomial("s0", polys[k], budget);
    } else {
      const int face = static_cast<int>(k) - 2;
      verdicts[k] = verify_polynomial("s" + std::to_string(face + 1), polys[k], budget, face);
      if (verdicts[k].combined.status != CheckStatus::Certified) {
        const CheckResult split = check_face_sign_split(problem, polys[k], face, budget.max_level);
        if (split.status != CheckStatus::Unknown) verdicts[k].combined = split;
      }
    }
  });

  VerificationReport report;
  report.h = std::move(verdicts[0]);
  report.s0 = std::move(verdicts[1]);
  for (std::size_t k = 2; k < verdicts.size(); ++k) report.faces.push_back(std::move(verdicts[k]));
  report.tolerance = 1e-10;
  report.overall = aggregate(report);
  return report;
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

inline constexpr unsigned kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

/// Point `index` of a Halton sequence mapped onto the standard simplex in
/// R^k (sorted-gaps map, uniform density).
inline Vector halton_simplex_point(std::uint64_t index, int k) {
  Vector x(k);
  if (k == 1) {
    x[0] = 1.0;
    return x;
  }
  std::vector<double> u(k - 1);
  for (int j = 0; j < k - 1; ++j) u[j] = radical_inverse(index, kHaltonPrimes[j % 12]);
  std::sort(u.begin(), u.end());
  double prev = 0.0;
  for (int j = 0; j < k - 1; ++j) {
    x[j] = u[j] - prev;
    prev = u[j];
  }
  x[k - 1] = 1.0 - prev;
  return x;
}

}  // namespace detail

/// Deterministic sample points: `num_samples` in the interior of the
/// standard simplex and `num_samples` on each face x_i = 0 (one point when
/// the face is a single vertex).
inline std::vector<Vector> decrease_sample_points(int n, std::size_t num_samples, std::uint64_t seed) {
  std::vector<Vector> pts;
  for (std::size_t s = 0; s < num_samples; ++s) {
    Vector x = detail::halton_simplex_point(seed + s + 1, n);
    if ((x.array() > 0.0).all()) pts.push_back(std::move(x));
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t count = n == 2 ? 1 : num_samples;
    for (std::size_t s = 0; s < count; ++s) {
      const Vector y = detail::halton_simplex_point(seed + s + 1, n - 1);
      Vector x = Vector::Zero(n);
      for (int j = 0, k = 0; j < n; ++j) {
        if (j != i) x[j] = y[k++];
      }
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

/// Evaluates <grad V(x), f(x) + eta(x)> with the exact multiplier at the
/// sample points; x = 0 is never sampled.
inline SamplingStats sample_decrease_check(const ProblemSpec& problem, const Certificate& cert,
                                           std::size_t num_samples = 2000, std::uint64_t seed = 0,
                                           double tolerance = 1e-8) {
  const LyapunovFunction v = assemble_V(cert);
  SamplingStats stats;
  stats.tolerance = tolerance;
  stats.max_derivative = -std::numeric_limits<double>::infinity();
  stats.min_h = std::numeric_limits<double>::infinity();
  for (const Vector& x : decrease_sample_points(problem.dim(), num_samples, seed)) {
    const Vector f = problem.eval_field(x);
    const FaceDescriptor face = problem.cone().active_set(x);
    const Vector eta = solve_multiplier(f, face).eta;
    const double deriv = v.gradient(x).dot(f + eta);
    ++stats.num_points;
    if (deriv > stats.max_derivative) {
      stats.max_derivative = deriv;
      stats.max_derivative_point = x;
    }
    if (deriv > tolerance && !stats.violation) stats.violation = x;
    stats.min_h = std::min(stats.min_h, cert.h(x));
  }
  return stats;
}

/// verify_certificate plus sampling; the overall status accounts for both.
inline VerificationReport verify_full(const ProblemSpec& problem, const Certificate& cert,
                                      const VerifyBudget& budget = {}) {
  VerificationReport report = verify_certificate(problem, cert, budget);
  report.sampling = sample_decrease_check(problem, cert, budget.num_samples, budget.seed, budget.sample_tolerance);
  report.overall = aggregate(report);
  return report;
}

}  // namespace copolyap
