#pragma once

#include <vector>

#include "conecert/l1cert.hpp"
#include "conecert/l2cert.hpp"
#include "conecert/models.hpp"

namespace conecert {

// One rollout along an admissible walk: x has length()+1 states, w and z one
// entry per step.
struct Trajectory {
  Walk walk;
  std::vector<Vector> x;
  std::vector<Vector> w;
  std::vector<Vector> z;

  int steps() const { return static_cast<int>(w.size()); }
};

Trajectory simulate(const SystemDescription& s, const Walk& walk,
                    const std::vector<Vector>& inputs, const Vector& x0);

enum class GainKind { L1, L2 };

// L1: sum(1^T z) / sum(1^T w). L2: sum(z^T z) / sum(w^T w) — the squared-norm
// ratio, directly comparable to a certified l2 gamma. Zero input is an error.
double empirical_gain(const Trajectory& traj, GainKind kind);

// Per-step slack of the Lyapunov decrease inequality
//   V(t+1) - V(t) < gamma <H_w, w(t)> - <H_z, z(t)>,
// with V the node-selected linear (l1) or quadratic (l2) function. Steps with
// (x(t), w(t)) = 0 are vacuous and excluded from the verdict.
struct DecreaseStep {
  int t = 0;
  double slack = 0.0;
  bool vacuous = false;
};

struct DecreaseReport {
  bool pass = false;
  double min_slack = 0.0;  // over non-vacuous steps; 0 when all vacuous
  std::vector<DecreaseStep> steps;
};

DecreaseReport lyapunov_decrease_check(const SystemDescription& s, const L1Certificate& cert,
                                       const Trajectory& traj);
DecreaseReport lyapunov_decrease_check(const SystemDescription& s, const L2Certificate& cert,
                                       const Trajectory& traj);

// Finite-horizon worst-case l1 gain over unit impulses: for nonnegative
// systems this equals the worst finite-horizon ratio over all nonzero
// nonnegative inputs (see README for the column-sum argument). Requires
// every mode matrix nonnegative.
struct L1OracleResult {
  double bound = 0.0;
  Walk walk;
  int injection_time = 0;
  int channel = 0;
};

L1OracleResult worst_case_l1_lower_bound(const SystemDescription& s, int horizon,
                                         int threads = 1);

// Largest singular value of the stacked input-output map over all admissible
// walks of the given length; returns the unsquared induced norm.
struct L2OracleResult {
  double bound = 0.0;
  Walk walk;
};

L2OracleResult worst_case_l2_lower_bound(const SystemDescription& s, int horizon,
                                         int threads = 1);

}  // namespace conecert
