#pragma once

/**
 * @file sim.hpp
 * @brief Projected Euler time stepping for x' = f(x) + eta on the orthant.
 *
 * x_{k+1} = max(x_k + dt f(x_k), 0). The multiplier estimate
 * (x_{k+1} - x_k)/dt - f(x_k) is nonnegative and supported on the
 * coordinates the projection clipped.
 */

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "copolyap/synth_core.hpp"

namespace copolyap {

inline constexpr double kBlowUpNorm = 1e12;

struct StepResult {
  Vector x_next;
  Vector eta;
};

inline StepResult step(const ProblemSpec& problem, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (x.size() != problem.dim()) throw DimensionError("step: state dimension mismatch");
  if (!x.allFinite()) throw std::domain_error("step: non-finite state");
  const Vector f = problem.eval_field(x);
  StepResult out;
  out.x_next = problem.cone().project(x + dt * f);
  out.eta = (out.x_next - x) / dt - f;
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  /// multipliers[k] is the estimate over the step ending at states[k];
  /// multipliers[0] is zero.
  std::vector<Vector> multipliers;
  double dt = 0.0;
  bool blew_up = false;
};

/// Projects x0 onto the orthant and takes round(T/dt) steps. Stops early,
/// setting blew_up, once ||x|| exceeds 1e12 or the state is non-finite.
inline Trajectory simulate(const ProblemSpec& problem, const Vector& x0, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("simulate: T and dt must be positive");
  if (x0.size() != problem.dim()) throw DimensionError("simulate: initial state dimension mismatch");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.multipliers.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(problem.cone().project(x0));
  traj.multipliers.push_back(Vector::Zero(problem.dim()));
  for (std::size_t k = 1; k <= steps; ++k) {
    StepResult s = step(problem, traj.states.back(), dt);
    if (!s.x_next.allFinite() || s.x_next.norm() > kBlowUpNorm) {
      traj.blew_up = true;
      break;
    }
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(std::move(s.x_next));
    traj.multipliers.push_back(std::move(s.eta));
  }
  return traj;
}

struct AlongStats {
  std::vector<double> values;
  /// max_k (V(x_{k+1}) - V(x_k)) / dt; -inf for a single state.
  double max_forward_difference = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool increase_flagged = false;
};

/// V along the trajectory; increases beyond c * dt are flagged.
inline AlongStats evaluate_along(const Certificate& cert, const Trajectory& traj, double c = 1.0) {
  const LyapunovFunction v = assemble_V(cert);
  AlongStats st;
  st.tolerance = c * traj.dt;
  st.values.reserve(traj.states.size());
  for (const Vector& x : traj.states) {
    if (x.size() != cert.h.nvars()) throw DimensionError("evaluate_along: dimension mismatch");
    st.values.push_back(v(x));
  }
  for (std::size_t k = 0; k + 1 < st.values.size(); ++k) {
    st.max_forward_difference = std::max(st.max_forward_difference, (st.values[k + 1] - st.values[k]) / traj.dt);
  }
  st.increase_flagged = st.max_forward_difference > st.tolerance;
  return st;
}

/// Header "t,x1..xn,eta1..etan[,V]", fixed 12-decimal rows.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const std::optional<std::vector<double>>& v_values = std::nullopt) {
  if (traj.states.empty()) return;
  const auto n = traj.states.front().size();
  os << "t";
  for (Eigen::Index j = 0; j < n; ++j) os << ",x" << (j + 1);
  for (Eigen::Index j = 0; j < n; ++j) os << ",eta" << (j + 1);
  if (v_values) os << ",V";
  os << '\n';
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.12f", std::abs(x) < 5e-13 ? 0.0 : x);
    os << buf;
  };
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    put(traj.times[k]);
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ',';
      put(traj.states[k][j]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ',';
      put(traj.multipliers[k][j]);
    }
    if (v_values) {
      os << ',';
      put((*v_values)[k]);
    }
    os << '\n';
  }
}

}  // namespace copolyap
