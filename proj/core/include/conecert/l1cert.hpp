#pragma once

#include <optional>
#include <vector>

#include "conecert/lp.hpp"
#include "conecert/models.hpp"
#include "conecert/tolerances.hpp"
#include "conecert/validation.hpp"

namespace conecert {

// Gain certificate for a positive switched system: one strictly positive
// vector per automaton node and the certified gain. Valid when for every
// edge (v_i, l, v_j)
//   A_l^T p_j - p_i + C_l^T 1 < 0   and   B_l^T p_j - gamma 1 + D_l^T 1 < 0.
struct L1Certificate {
  double gamma = 0.0;
  std::vector<Vector> p;  // indexed by node
  double margin = 0.0;    // strictness margin used at assembly
};

// Node-wise linear Lyapunov certificate of asymptotic stability: the state
// conditions above with the output terms dropped.
struct StabilityCertificate {
  std::vector<Vector> p;
  double margin = 0.0;
};

// Variables are the stacked p_i (bounded below by interior_floor) followed
// by gamma; one inequality row per state and input channel of every edge.
LinearProgram assemble_l1_lp(const SystemDescription& s, double margin,
                             double interior_floor);

// Minimizes gamma over the assembled LP. nullopt means the LP is infeasible.
std::optional<L1Certificate> certify_l1(const SystemDescription& s,
                                        double margin = tol::kL1DefaultMargin,
                                        double interior_floor = tol::kL1DefaultInteriorFloor);

std::optional<StabilityCertificate> certify_l1_stability(
    const SystemDescription& s, double margin = tol::kL1DefaultMargin,
    double interior_floor = tol::kL1DefaultInteriorFloor);

// Re-evaluates every edge inequality from scratch; passes when each residual
// is strictly below -tol and every p_i entry strictly exceeds tol.
CheckReport check_l1_certificate(const SystemDescription& s, const L1Certificate& cert,
                                 double tol);

CheckReport check_stability_certificate(const SystemDescription& s,
                                        const StabilityCertificate& cert, double tol);

}  // namespace conecert
