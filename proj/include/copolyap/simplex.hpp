#pragma once

/**
 * @file simplex.hpp
 * @brief Simplicial partitions of the standard simplex and of its faces.
 *
 * A Simplex holds k affinely independent vertices lying on the standard
 * simplex {x >= 0, sum x = 1} in R^n. The full standard simplex has k = n;
 * the coordinate face x_i = 0 has k = n - 1.
 */

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "copolyap/poly.hpp"

namespace copolyap {

inline constexpr double kSimplexTolerance = 1e-12;

class DegenerateSimplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Simplex {
 public:
  explicit Simplex(std::vector<Vector> vertices) : vertices_(std::move(vertices)) { validate(); }

  const std::vector<Vector>& vertices() const { return vertices_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int ambient_dim() const { return static_cast<int>(vertices_.front().size()); }

  /// Longest edge (2-norm); ties go to the lowest (i, j) pair.
  std::pair<int, int> longest_edge() const {
    std::pair<int, int> best{0, 0};
    double best_len = -1.0;
    for (int i = 0; i < num_vertices(); ++i) {
      for (int j = i + 1; j < num_vertices(); ++j) {
        const double len = (vertices_[i] - vertices_[j]).norm();
        if (len > best_len * (1.0 + kSimplexTolerance)) {
          best_len = len;
          best = {i, j};
        }
      }
    }
    return best;
  }

  double diameter() const {
    double d = 0.0;
    for (int i = 0; i < num_vertices(); ++i) {
      for (int j = i + 1; j < num_vertices(); ++j) d = std::max(d, (vertices_[i] - vertices_[j]).norm());
    }
    return d;
  }

  /// (k-1)-dimensional volume; a single point has volume 1.
  double volume() const {
    const int k = num_vertices();
    if (k == 1) return 1.0;
    Matrix edges(ambient_dim(), k - 1);
    for (int j = 1; j < k; ++j) edges.col(j - 1) = vertices_[j] - vertices_[0];
    const double gram = (edges.transpose() * edges).determinant();
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    return std::sqrt(std::max(gram, 0.0)) / fact;
  }

  Vector barycenter() const {
    Vector c = Vector::Zero(ambient_dim());
    for (const Vector& v : vertices_) c += v;
    return c / num_vertices();
  }

  /// Barycentric coordinates of x in the affine hull (least squares).
  Vector barycentric(const Vector& x) const {
    const int k = num_vertices();
    Matrix a(ambient_dim() + 1, k);
    Vector b(ambient_dim() + 1);
    for (int j = 0; j < k; ++j) {
      a.col(j).head(ambient_dim()) = vertices_[j];
      a(ambient_dim(), j) = 1.0;
    }
    b.head(ambient_dim()) = x;
    b[ambient_dim()] = 1.0;
    return a.colPivHouseholderQr().solve(b);
  }

  bool contains(const Vector& x, double tol = 1e-9) const {
    const Vector lambda = barycentric(x);
    Vector recon = Vector::Zero(ambient_dim());
    for (int j = 0; j < num_vertices(); ++j) recon += lambda[j] * vertices_[j];
    return (recon - x).norm() <= tol && (lambda.array() >= -tol).all();
  }

 private:
  void validate() const {
    if (vertices_.empty()) throw DegenerateSimplexError("simplex needs at least one vertex");
    const int n = static_cast<int>(vertices_.front().size());
    for (const Vector& v : vertices_) {
      if (v.size() != n) throw DimensionError("simplex vertices differ in dimension");
      if ((v.array() < -kSimplexTolerance).any() || std::abs(v.sum() - 1.0) > kSimplexTolerance) {
        throw std::invalid_argument("simplex vertex is not on the standard simplex");
      }
    }
    if (num_vertices() > n) throw DegenerateSimplexError("too many vertices for the ambient dimension");
    if (num_vertices() > 1) {
      Matrix edges(n, num_vertices() - 1);
      for (int j = 1; j < num_vertices(); ++j) edges.col(j - 1) = vertices_[j] - vertices_[0];
      Eigen::FullPivLU<Matrix> lu(edges);
      lu.setThreshold(1e-13);
      if (lu.rank() != num_vertices() - 1) throw DegenerateSimplexError("simplex vertices are affinely dependent");
    }
  }

  std::vector<Vector> vertices_;
};

/// {e_1, ..., e_n}.
inline Simplex standard_simplex(int n) {
  if (n < 2) throw std::invalid_argument("standard_simplex: n must be at least 2");
  std::vector<Vector> v;
  for (int i = 0; i < n; ++i) v.push_back(Vector::Unit(n, i));
  return Simplex(std::move(v));
}

/// The face x_excluded = 0 of the standard simplex: {e_j : j != excluded}.
inline Simplex face_simplex(int n, int excluded) {
  if (n < 2) throw std::invalid_argument("face_simplex: n must be at least 2");
  if (excluded < 0 || excluded >= n) throw DimensionError("face_simplex: face index out of range");
  std::vector<Vector> v;
  for (int i = 0; i < n; ++i) {
    if (i != excluded) v.push_back(Vector::Unit(n, i));
  }
  return Simplex(std::move(v));
}

/// Longest-edge bisection. With longest edge (i, j) and midpoint m, the
/// first child replaces v_j by m and the second replaces v_i by m.
inline std::pair<Simplex, Simplex> bisect(const Simplex& s) {
  if (s.num_vertices() < 2 || s.diameter() <= 0.0) throw DegenerateSimplexError("bisect: degenerate simplex");
  const auto [i, j] = s.longest_edge();
  const Vector mid = 0.5 * (s.vertices()[i] + s.vertices()[j]);
  std::vector<Vector> a = s.vertices();
  std::vector<Vector> b = s.vertices();
  a[j] = mid;
  b[i] = mid;
  return {Simplex(std::move(a)), Simplex(std::move(b))};
}

/// Bisects until every piece has diameter <= target.
inline std::vector<Simplex> refine_simplex(const Simplex& s, double target) {
  std::vector<Simplex> out;
  std::vector<Simplex> stack{s};
  while (!stack.empty()) {
    Simplex cur = std::move(stack.back());
    stack.pop_back();
    if (cur.num_vertices() < 2 || cur.diameter() <= target * (1.0 + kSimplexTolerance)) {
      out.push_back(std::move(cur));
      continue;
    }
    auto [a, b] = bisect(cur);
    // Second child pushed first so the first child is processed first.
    stack.push_back(std::move(b));
    stack.push_back(std::move(a));
  }
  return out;
}

struct SimplicialPartition {
  std::vector<Simplex> simplices;
  int level = 0;

  /// 2^-level, the bookkeeping value halved at every refinement.
  double nominal_delta() const { return std::ldexp(1.0, -level); }
};

inline SimplicialPartition initial_partition(Simplex s) { return SimplicialPartition{{std::move(s)}, 0}; }

/// Maximum simplex diameter (2-norm).
inline double diameter(const SimplicialPartition& p) {
  if (p.simplices.empty()) throw std::invalid_argument("diameter: empty partition");
  double d = 0.0;
  for (const Simplex& s : p.simplices) d = std::max(d, s.diameter());
  return d;
}

/// Halves the partition diameter: every simplex is bisected until its pieces
/// are at most half the current maximum diameter.
inline SimplicialPartition refine_all(const SimplicialPartition& p) {
  const double target = 0.5 * diameter(p);
  SimplicialPartition out;
  out.level = p.level + 1;
  for (const Simplex& s : p.simplices) {
    if (target <= 0.0) {
      out.simplices.push_back(s);
      continue;
    }
    auto pieces = refine_simplex(s, target);
    for (Simplex& piece : pieces) out.simplices.push_back(std::move(piece));
  }
  return out;
}

/// Partition of `root` refined `level` times.
inline SimplicialPartition partition_at_level(const Simplex& root, int level) {
  SimplicialPartition p = initial_partition(root);
  for (int l = 0; l < level; ++l) p = refine_all(p);
  return p;
}

}  // namespace copolyap
