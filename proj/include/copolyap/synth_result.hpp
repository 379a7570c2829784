#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copolyap/lp.hpp"
#include "copolyap/report.hpp"
#include "copolyap/synth_core.hpp"

namespace copolyap {

/// One grid node visited by a synthesizer.
struct NodeRecord {
  int level = 0;  // partition level (disc) or lift degree (polya)
  int r = 0;
  int degree = 0;
  std::size_t num_constraints = 0;
  LpStatus lp_status = LpStatus::NumericalFailure;
  bool skipped = false;
  /// Set when the LP was feasible and the candidate was re-verified.
  std::optional<CheckStatus> verification;
  std::string message;
};

struct SynthesisResult {
  std::optional<Certificate> certificate;
  std::vector<NodeRecord> nodes;

  bool found() const { return certificate.has_value(); }
};

}  // namespace copolyap
