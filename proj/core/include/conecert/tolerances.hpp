#pragma once

#include <cstddef>

// All numerical tolerances live here. Suffix conventions: *Rel values scale
// with the named quantity, everything else is absolute.
namespace conecert::tol {

// A matrix counts as symmetric when max_ij |M(i,j)-M(j,i)| stays below
// kSymmetryRel * max(1, max_ij |M(i,j)|).
inline constexpr double kSymmetryRel = 1e-8;

// Cyclic Jacobi stops once the off-diagonal Frobenius norm drops below
// kJacobiOffRel * ||M||_F, and fails after kJacobiMaxSweeps sweeps.
inline constexpr double kJacobiOffRel = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

// solve_linear treats pivots below kSingularPivotRel * ||A||_inf as singular.
inline constexpr double kSingularPivotRel = 1e-13;

// Power iteration (spectral radius, large singular values): relative change
// per step that counts as converged, and the total iteration budget.
inline constexpr double kPowerIterRel = 1e-6;
inline constexpr int kPowerIterCap = 100000;

// Dense matrices above this edge length switch from the Jacobi route to
// power iteration inside max_singular_value.
inline constexpr int kJacobiSizeLimit = 128;

// LP solver: feasibility residual scale (relative to max(1, ||h||_inf)),
// pivot and reduced-cost cutoffs, and the pivot budget.
inline constexpr double kLpFeasRel = 1e-8;
inline constexpr double kLpPivotTol = 1e-11;
inline constexpr double kLpReducedCostTol = 1e-9;
inline constexpr long kLpPivotCap = 1000000;

// l1 certifier defaults: strictness margin added to every inequality and the
// entry-wise floor keeping each p_i in the dual-cone interior.
inline constexpr double kL1DefaultMargin = 1e-7;
inline constexpr double kL1DefaultInteriorFloor = 1e-6;

// l2 certifier: LMI margin kL2MarginRel * max(1, max_l ||(A B; C D)_l||_inf^2),
// projection convergence target, per-call iteration cap, and the relative
// bracket width at which the gamma bisection stops.
inline constexpr double kL2MarginRel = 1e-6;
inline constexpr double kL2ProjectionResidual = 1e-8;
inline constexpr int kL2IterationCap = 50000;
inline constexpr double kL2DefaultGammaTol = 1e-3;
inline constexpr double kL2GammaBracketCap = 1152921504606846976.0;  // 2^60

// Walk enumeration aborts beyond this many walks.
inline constexpr std::size_t kWalkEnumerationCap = 10000000;

// The l2 oracle materializes the stacked input-output matrix only while
// horizon * max(q, r) stays within this bound; larger problems use the
// implicit operator instead.
inline constexpr int kDenseToeplitzLimit = 2000;

}  // namespace conecert::tol
