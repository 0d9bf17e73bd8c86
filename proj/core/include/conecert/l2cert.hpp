#pragma once

#include <optional>
#include <vector>

#include "conecert/models.hpp"
#include "conecert/tolerances.hpp"
#include "conecert/validation.hpp"

namespace conecert {

// Quadratic gain certificate: one positive-definite matrix per automaton
// node. Valid when for every edge (v_i, l, v_j) the stacked block matrix
//   [ A^T P_j A - P_i + C^T C    A^T P_j B + C^T D ]
//   [ B^T P_j A + D^T C          B^T P_j B + D^T D - gamma I ]
// is negative definite. gamma bounds the squared induced l2 norm.
struct L2Certificate {
  double gamma = 0.0;
  std::vector<Matrix> p;  // indexed by node, each n x n symmetric
  double margin = 0.0;
};

// The edge block above, evaluated at the given P family; exactly symmetric.
Matrix assemble_l2_block(const SystemDescription& s, const std::vector<Matrix>& p,
                         const Edge& edge, double gamma);

// Data-relative strictness margin for the LMIs.
double default_l2_margin(const SystemDescription& s);

// Projection splitting (Douglas-Rachford) between the affine set {edge
// blocks + slack = -margin*I} and the cone {P_i >= margin*I} x {slacks PSD}.
// Returns the P family on convergence; nullopt means no certificate was
// found within the iteration budget, which does not prove infeasibility.
std::optional<std::vector<Matrix>> feasible_l2(const SystemDescription& s, double gamma,
                                               double margin,
                                               int iteration_cap = tol::kL2IterationCap,
                                               const std::vector<Matrix>* warm_start = nullptr);

// Doubling search for a feasible bracket starting at gamma = 1, then
// bisection to the requested relative width; the certificate ships with the
// feasible (upper) end of the bracket. nullopt when nothing up to gamma_max
// (default 2^60) certifies; one-sided for the same reason feasible_l2 is.
std::optional<L2Certificate> certify_l2(const SystemDescription& s,
                                        double gamma_tol = tol::kL2DefaultGammaTol,
                                        std::optional<double> gamma_max = std::nullopt);

// Independent re-check: every edge block must have max eigenvalue <= -tol
// (Jacobi route) and every P_i - tol*I must admit a Cholesky factorization.
CheckReport check_l2_certificate(const SystemDescription& s, const L2Certificate& cert,
                                 double tol);

// Outer product of the stacked (x, w) vector with itself: the rank-one
// element of the lifted state-input cone.
Matrix lift_rank_one(const Vector& x, const Vector& w);

// One step of the lifted dynamics: Y -> ([A B] Y [A B]^T, [C D] Y [C D]^T).
struct LiftedStep {
  Matrix state;   // n x n
  Matrix output;  // r x r
};
LiftedStep lifted_step(const SystemDescription& s, int label, const Matrix& y);

}  // namespace conecert
