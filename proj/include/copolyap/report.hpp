#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copolyap/poly.hpp"

namespace copolyap {

enum class CheckStatus { Certified, Falsified, Unknown };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Certified: return "certified";
    case CheckStatus::Falsified: return "falsified";
    case CheckStatus::Unknown: return "unknown";
  }
  return "unknown";
}

/// Outcome of one copositivity check.
///
/// `param` is the partition level (tensor checker) or lift degree (Polya)
/// at which the check concluded; for Unknown it is the exhausted budget.
struct CheckResult {
  CheckStatus status = CheckStatus::Unknown;
  std::string method;
  int param = 0;
  std::optional<Vector> witness;
  double witness_value = 0.0;
};

struct PolynomialVerdict {
  std::string name;
  CheckResult tensor;
  CheckResult polya;
  /// Certified if either checker certified, Falsified if the tensor checker
  /// found a witness, Unknown otherwise.
  CheckResult combined;
};

struct SamplingStats {
  std::size_t num_points = 0;
  /// Largest <grad V(x), f(x) + eta(x)> over the samples.
  double max_derivative = 0.0;
  Vector max_derivative_point;
  double min_h = 0.0;
  double tolerance = 1e-8;
  /// First sample with derivative above tolerance, if any.
  std::optional<Vector> violation;
};

struct VerificationReport {
  PolynomialVerdict h;
  PolynomialVerdict s0;
  std::vector<PolynomialVerdict> faces;
  std::optional<SamplingStats> sampling;
  CheckStatus overall = CheckStatus::Unknown;
  double tolerance = 1e-10;
};

}  // namespace copolyap
