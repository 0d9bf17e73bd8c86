#pragma once

#include <vector>

#include "conecert/automaton.hpp"
#include "conecert/matrix.hpp"
#include "conecert/validation.hpp"

namespace conecert {

// One mode of x(t+1) = A x(t) + B w(t), z(t) = C x(t) + D w(t).
struct ModeMatrices {
  int label = 0;  // 0-based, equals the mode's position
  Matrix a;       // n x n
  Matrix b;       // n x q
  Matrix c;       // r x n
  Matrix d;       // r x q
};

enum class SystemKind { Pss, Gss };

struct Dimensions {
  int n = 0;  // state
  int q = 0;  // input
  int r = 0;  // output
};

struct SystemDescription {
  SystemKind kind = SystemKind::Pss;
  Dimensions dims;
  std::vector<ModeMatrices> modes;
  SwitchingGraph graph;

  int mode_count() const { return static_cast<int>(modes.size()); }
  int node_count() const { return static_cast<int>(graph.nodes.size()); }
};

// Dimension and graph problems are hard errors; negative entries in a
// system declared pss are warnings (the certifier still runs on them).
ValidationReport validate_system(const SystemDescription& s);

// True when every entry of every mode matrix is nonnegative.
bool all_modes_nonnegative(const SystemDescription& s);

// Disturbance channel layout for the virus example: one shared channel
// (B = 100*ones(3x1), q=1) or one channel per country (B = 100*I, q=3).
// Column is the default; it reproduces the reference gains (see README).
enum class BShape { Column, Diag };

// Three-country epidemic model with a four-node switching rule. Quarantine
// parameters must lie in [0, 1.5].
SystemDescription build_virus_example(double kb_quarantine = 1.0, double kc_quarantine = 0.6,
                                      BShape b_shape = BShape::Column);

// Magnitude of the dominant eigenvalue: Jacobi for symmetric inputs, power
// iteration with random restarts otherwise. Power iteration does not settle
// when the dominant eigenvalues form a non-normal complex pair; that raises
// ConvergenceFailure carrying the best estimate.
double spectral_radius(const Matrix& a);

}  // namespace conecert
