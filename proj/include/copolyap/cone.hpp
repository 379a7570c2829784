#pragma once

#include <stdexcept>
#include <vector>

#include "copolyap/poly.hpp"

namespace copolyap {

inline constexpr double kActivityTolerance = 1e-9;

class NotInConeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Indices (0-based, ascending) of the coordinates that vanish at a point.
struct FaceDescriptor {
  std::vector<int> active;

  bool is_interior() const { return active.empty(); }
  bool contains(int i) const {
    for (int a : active) {
      if (a == i) return true;
    }
    return false;
  }
  bool operator==(const FaceDescriptor&) const = default;
};

/// The nonnegative orthant R^n_+. Self-dual, so K* = K.
class OrthantCone {
 public:
  explicit OrthantCone(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("OrthantCone: dimension must be at least 1");
  }

  int dim() const { return n_; }

  bool contains(const Vector& x, double tol = kActivityTolerance) const {
    check_dim(x);
    return (x.array() >= -tol).all();
  }

  /// Euclidean projection: componentwise max(x_i, 0).
  Vector project(const Vector& x) const {
    check_dim(x);
    return x.cwiseMax(0.0);
  }

  FaceDescriptor active_set(const Vector& x, double tol = kActivityTolerance) const {
    check_dim(x);
    FaceDescriptor face;
    for (int i = 0; i < n_; ++i) {
      if (x[i] < -tol) throw NotInConeError("active_set: point lies outside the orthant");
      if (x[i] <= tol) face.active.push_back(i);
    }
    return face;
  }

  bool operator==(const OrthantCone&) const = default;

 private:
  void check_dim(const Vector& x) const {
    if (x.size() != n_) throw DimensionError("orthant: point dimension mismatch");
  }

  int n_;
};

}  // namespace copolyap
