#pragma once

/**
 * @file comp.hpp
 * @brief Complementarity problems 0 <= eta  _|_  q + M eta >= 0.
 *
 * The dynamics only ever need M = I restricted to the active face of the
 * orthant, where the problem decouples coordinatewise. The enumeration
 * solver handles general (small) M and serves as the reference oracle.
 */

#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "copolyap/cone.hpp"

namespace copolyap {

inline constexpr double kComplementarityTolerance = 1e-10;

struct LcpProblem {
  Vector q;
  Matrix M;
};

struct LccpSolution {
  Vector eta;
  /// Indices with eta_i > 0.
  std::vector<int> active_multipliers;
  /// eta^T (q + M eta); zero up to rounding.
  double objective = 0.0;
};

namespace detail {

inline LccpSolution make_solution(Vector eta, const Vector& w) {
  LccpSolution s;
  for (int i = 0; i < eta.size(); ++i) {
    if (eta[i] > 0.0) s.active_multipliers.push_back(i);
  }
  s.objective = eta.dot(w);
  s.eta = std::move(eta);
  return s;
}

}  // namespace detail

/// Multiplier of the orthant dynamics at a point with active set `face`:
/// eta_j = max(0, -f_j) on active coordinates, 0 elsewhere (LCP with M = I
/// on the tangent cone).
inline LccpSolution solve_multiplier(const Vector& f_val, const FaceDescriptor& face) {
  Vector eta = Vector::Zero(f_val.size());
  for (int j : face.active) {
    if (j < 0 || j >= f_val.size()) throw DimensionError("solve_multiplier: face index out of range");
    eta[j] = std::max(0.0, -f_val[j]);
  }
  const Vector w = f_val + eta;
  return detail::make_solution(std::move(eta), w);
}

enum class LcpStatus { Unique, Multiple, NoSolution };

struct LcpEnumeration {
  LcpStatus status = LcpStatus::NoSolution;
  /// Every distinct complementary solution found.
  std::vector<LccpSolution> witnesses;

  const LccpSolution& solution() const {
    if (status != LcpStatus::Unique) {
      throw std::runtime_error(status == LcpStatus::NoSolution ? "LCP has no solution"
                                                               : "LCP has multiple solutions");
    }
    return witnesses.front();
  }
};

/// Brute force over the 2^n complementary index sets. For each candidate
/// basis B solves M_BB eta_B = -q_B and keeps it when eta_B >= 0 and
/// (q + M eta) >= 0 off B.
inline LcpEnumeration solve_lcp_enumeration(const Vector& q, const Matrix& M) {
  const int n = static_cast<int>(q.size());
  if (M.rows() != n || M.cols() != n) throw DimensionError("solve_lcp_enumeration: M must be n x n");
  if (n > 20) throw std::invalid_argument("solve_lcp_enumeration: enumeration limited to n <= 20");

  const double tol = kComplementarityTolerance * (1.0 + q.lpNorm<Eigen::Infinity>());
  LcpEnumeration result;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<int> basis;
    for (int i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) basis.push_back(i);
    }
    Vector eta = Vector::Zero(n);
    if (!basis.empty()) {
      const int k = static_cast<int>(basis.size());
      Matrix mbb(k, k);
      Vector rhs(k);
      for (int a = 0; a < k; ++a) {
        rhs[a] = -q[basis[a]];
        for (int b = 0; b < k; ++b) mbb(a, b) = M(basis[a], basis[b]);
      }
      Eigen::FullPivLU<Matrix> lu(mbb);
      if (!lu.isInvertible()) continue;
      const Vector sol = lu.solve(rhs);
      for (int a = 0; a < k; ++a) eta[basis[a]] = sol[a];
    }
    const Vector w = q + M * eta;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const bool in_basis = (mask >> i) & 1U;
      if (in_basis && eta[i] < -tol) ok = false;
      if (!in_basis && w[i] < -tol) ok = false;
    }
    if (!ok) continue;
    eta = eta.cwiseMax(0.0);
    bool duplicate = false;
    for (const auto& s : result.witnesses) {
      if ((s.eta - eta).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + eta.lpNorm<Eigen::Infinity>())) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) result.witnesses.push_back(detail::make_solution(eta, q + M * eta));
  }
  if (result.witnesses.empty()) {
    result.status = LcpStatus::NoSolution;
  } else {
    result.status = result.witnesses.size() == 1 ? LcpStatus::Unique : LcpStatus::Multiple;
  }
  return result;
}

/// All principal minors positive.
inline bool is_p_matrix(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n || n > 20) throw std::invalid_argument("is_p_matrix: square matrix with n <= 20 required");
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) idx.push_back(i);
    }
    Matrix sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = M(idx[a], idx[b]);
    }
    if (sub.determinant() <= 0.0) return false;
  }
  return true;
}

}  // namespace copolyap
