#include "conecert/l1cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conecert/errors.hpp"

namespace conecert {

namespace {

void require_certifiable(const SystemDescription& s) {
  if (s.kind != SystemKind::Pss) {
    throw InputError("l1 certification applies to pss systems only");
  }
  ValidationReport report = validate_system(s);
  if (!report.ok()) {
    throw InputError("system fails validation: " + report.errors.front());
  }
}

Vector column_sums(const Matrix& m) {
  Vector s(m.cols(), 0.0);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s[j] += m(i, j);
  return s;
}

// In-place row equilibration: row and rhs divided by max(1, row inf-norm).
// The feasible set is unchanged; the virus example mixes coefficients of
// magnitude 0.4 and 100, which this keeps out of the pivot tolerances.
void scale_rows(LinearProgram& p) {
  for (int i = 0; i < p.row_count(); ++i) {
    double scale = 1.0;
    for (int j = 0; j < p.variable_count(); ++j) {
      scale = std::max(scale, std::abs(p.constraints(i, j)));
    }
    if (scale > 1.0) {
      const double inv = 1.0 / scale;
      for (int j = 0; j < p.variable_count(); ++j) p.constraints(i, j) *= inv;
      p.rhs[i] *= inv;
    }
  }
}

LinearProgram assemble(const SystemDescription& s, double margin, double interior_floor,
                       bool with_performance) {
  require_certifiable(s);
  if (margin < 0.0) throw InputError("margin must be nonnegative");
  if (interior_floor <= 0.0) throw InputError("interior floor must be positive");

  const auto [n, q, r] = s.dims;
  const int n_nodes = s.node_count();
  const int n_edges = static_cast<int>(s.graph.edges.size());
  const int n_vars = n_nodes * n + (with_performance ? 1 : 0);
  const int gamma_col = n_nodes * n;
  const int rows_per_edge = with_performance ? n + q : n;

  LinearProgram p;
  p.objective.assign(n_vars, 0.0);
  if (with_performance) {
    p.objective[gamma_col] = 1.0;  // minimize gamma
  } else {
    // Feasibility problem; a definite objective keeps the answer canonical.
    p.objective.assign(n_vars, 1.0);
  }
  p.lower_bounds.assign(n_vars, interior_floor);
  if (with_performance) p.lower_bounds[gamma_col] = 0.0;
  p.constraints = Matrix(n_edges * rows_per_edge, n_vars);
  p.rhs.assign(n_edges * rows_per_edge, 0.0);

  int row = 0;
  for (const Edge& e : s.graph.edges) {
    const ModeMatrices& mode = s.modes[e.label];
    const Vector c_colsum = column_sums(mode.c);  // C^T 1
    for (int k = 0; k < n; ++k, ++row) {
      // (A^T p_j - p_i)_k <= -margin - (C^T 1)_k
      for (int a = 0; a < n; ++a) p.constraints(row, e.to * n + a) += mode.a(a, k);
      p.constraints(row, e.from * n + k) -= 1.0;
      p.rhs[row] = -margin - c_colsum[k];
    }
    if (!with_performance) continue;
    const Vector d_colsum = column_sums(mode.d);  // D^T 1
    for (int k = 0; k < q; ++k, ++row) {
      // (B^T p_j)_k - gamma <= -margin - (D^T 1)_k
      for (int a = 0; a < n; ++a) p.constraints(row, e.to * n + a) += mode.b(a, k);
      p.constraints(row, gamma_col) -= 1.0;
      p.rhs[row] = -margin - d_colsum[k];
    }
  }
  return p;
}

std::vector<Vector> split_p(const Vector& x, int n_nodes, int n) {
  std::vector<Vector> p(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    p[i].assign(x.begin() + static_cast<std::ptrdiff_t>(i) * n,
                x.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
  }
  return p;
}

void require_cert_shape(const SystemDescription& s, const std::vector<Vector>& p) {
  if (static_cast<int>(p.size()) != s.node_count()) {
    throw InputError("certificate has " + std::to_string(p.size()) + " node vectors, system has " +
                     std::to_string(s.node_count()) + " nodes");
  }
  for (const Vector& pi : p) {
    if (static_cast<int>(pi.size()) != s.dims.n) {
      throw InputError("certificate vector length does not match the state dimension");
    }
  }
}

CheckReport check_edges(const SystemDescription& s, const std::vector<Vector>& p,
                        const double* gamma, double tol) {
  require_cert_shape(s, p);
  if (tol < 0.0) throw InputError("check tolerance must be nonnegative");

  CheckReport report;
  report.pass = true;
  report.worst_residual = -std::numeric_limits<double>::infinity();

  for (std::size_t idx = 0; idx < s.graph.edges.size(); ++idx) {
    const Edge& e = s.graph.edges[idx];
    const ModeMatrices& mode = s.modes[e.label];

    double worst = -std::numeric_limits<double>::infinity();
    Vector state_resid = transpose_times(mode.a, p[e.to]);  // A^T p_j
    const Vector c_colsum = column_sums(mode.c);
    for (int k = 0; k < s.dims.n; ++k) {
      worst = std::max(worst, state_resid[k] - p[e.from][k] + c_colsum[k]);
    }
    if (gamma) {
      Vector input_resid = transpose_times(mode.b, p[e.to]);  // B^T p_j
      const Vector d_colsum = column_sums(mode.d);
      for (int k = 0; k < s.dims.q; ++k) {
        worst = std::max(worst, input_resid[k] - *gamma + d_colsum[k]);
      }
    }
    report.edges.push_back({static_cast<int>(idx), worst});
    report.worst_residual = std::max(report.worst_residual, worst);
    if (!(worst < -tol)) {
      report.pass = false;
      report.failures.push_back("edge #" + std::to_string(idx) + " (" + s.graph.nodes[e.from] +
                                " -m" + std::to_string(e.label + 1) + "-> " + s.graph.nodes[e.to] +
                                "): residual " + std::to_string(worst) + " not below " +
                                std::to_string(-tol));
    }
  }

  for (std::size_t i = 0; i < p.size(); ++i) {
    double lowest = p[i].empty() ? 0.0 : p[i].front();
    for (double v : p[i]) lowest = std::min(lowest, v);
    if (!(lowest > tol)) {
      report.pass = false;
      report.failures.push_back("p[" + s.graph.nodes[i] + "] has entry " + std::to_string(lowest) +
                                " not above " + std::to_string(tol));
    }
  }
  return report;
}

}  // namespace

LinearProgram assemble_l1_lp(const SystemDescription& s, double margin, double interior_floor) {
  return assemble(s, margin, interior_floor, /*with_performance=*/true);
}

std::optional<L1Certificate> certify_l1(const SystemDescription& s, double margin,
                                        double interior_floor) {
  LinearProgram lp = assemble_l1_lp(s, margin, interior_floor);
  scale_rows(lp);
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("l1 LP reported unbounded; the assembled program is malformed");
  }
  L1Certificate cert;
  cert.gamma = sol.x.back();
  cert.p = split_p(sol.x, s.node_count(), s.dims.n);
  cert.margin = margin;
  return cert;
}

std::optional<StabilityCertificate> certify_l1_stability(const SystemDescription& s, double margin,
                                                         double interior_floor) {
  LinearProgram lp = assemble(s, margin, interior_floor, /*with_performance=*/false);
  scale_rows(lp);
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("stability LP reported unbounded; the assembled program is malformed");
  }
  StabilityCertificate cert;
  cert.p = split_p(sol.x, s.node_count(), s.dims.n);
  cert.margin = margin;
  return cert;
}

CheckReport check_l1_certificate(const SystemDescription& s, const L1Certificate& cert,
                                 double tol) {
  return check_edges(s, cert.p, &cert.gamma, tol);
}

CheckReport check_stability_certificate(const SystemDescription& s,
                                        const StabilityCertificate& cert, double tol) {
  return check_edges(s, cert.p, nullptr, tol);
}

}  // namespace conecert
