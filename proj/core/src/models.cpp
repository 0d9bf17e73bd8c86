#include "conecert/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "conecert/errors.hpp"
#include "conecert/linalg.hpp"
#include "conecert/tolerances.hpp"

namespace conecert {

namespace {

void check_mode_shape(const SystemDescription& s, const ModeMatrices& mode,
                      ValidationReport& report) {
  const auto [n, q, r] = s.dims;
  const std::string who = "mode m" + std::to_string(mode.label + 1);
  auto expect = [&](const Matrix& m, const char* name, int rows, int cols) {
    if (m.rows() != rows || m.cols() != cols) {
      report.errors.push_back(who + ": " + name + " is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                              "x" + std::to_string(cols));
    } else if (!m.all_finite()) {
      report.errors.push_back(who + ": " + name + " has non-finite entries");
    }
  };
  expect(mode.a, "A", n, n);
  expect(mode.b, "B", n, q);
  expect(mode.c, "C", r, n);
  expect(mode.d, "D", r, q);
}

void warn_negative_entries(const ModeMatrices& mode, ValidationReport& report) {
  const std::string who = "mode m" + std::to_string(mode.label + 1);
  auto scan = [&](const Matrix& m, const char* name) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (m(i, j) < 0.0) {
          report.warnings.push_back(who + ", " + name + "[" + std::to_string(i + 1) + "][" +
                                    std::to_string(j + 1) + "] = " + std::to_string(m(i, j)) +
                                    " is negative in a pss system");
        }
      }
    }
  };
  scan(mode.a, "A");
  scan(mode.b, "B");
  scan(mode.c, "C");
  scan(mode.d, "D");
}

}  // namespace

ValidationReport validate_system(const SystemDescription& s) {
  ValidationReport report = validate_graph(s.graph);

  const auto [n, q, r] = s.dims;
  if (n < 1 || q < 1 || r < 1) {
    report.errors.push_back("dimensions (n,q,r) must all be at least 1");
  }
  if (s.graph.mode_count != s.mode_count()) {
    report.errors.push_back("graph declares " + std::to_string(s.graph.mode_count) +
                            " modes but the system has " + std::to_string(s.mode_count()));
  }
  for (int i = 0; i < s.mode_count(); ++i) {
    if (s.modes[i].label != i) {
      report.errors.push_back("mode at position " + std::to_string(i) + " carries label m" +
                              std::to_string(s.modes[i].label + 1));
    }
    check_mode_shape(s, s.modes[i], report);
  }

  if (s.kind == SystemKind::Pss) {
    for (const ModeMatrices& mode : s.modes) warn_negative_entries(mode, report);
  }
  return report;
}

bool all_modes_nonnegative(const SystemDescription& s) {
  for (const ModeMatrices& mode : s.modes) {
    for (const Matrix* m : {&mode.a, &mode.b, &mode.c, &mode.d}) {
      for (double v : m->entries())
        if (v < 0.0) return false;
    }
  }
  return true;
}

SystemDescription build_virus_example(double kb_quarantine, double kc_quarantine,
                                      BShape b_shape) {
  for (double k : {kb_quarantine, kc_quarantine}) {
    if (!(k >= 0.0 && k <= 1.5)) {
      throw InputError("virus example quarantine rates must lie in [0, 1.5]");
    }
  }

  const Matrix lambda = Matrix::from_rows({{1.2, 0, 0}, {0, 1.4, 0}, {0, 0, 1.4}});
  const double s = 0.4;
  // Open borders couple all three countries; with country B sealed off only
  // the A-C border remains.
  const Matrix spread_open = s * Matrix::from_rows({{-2, 1, 1}, {1, -2, 1}, {1, 1, -2}});
  const Matrix spread_closed = s * Matrix::from_rows({{-1, 0, 1}, {0, 0, 0}, {1, 0, -1}});

  auto quarantine = [](double ka, double kb, double kc) {
    return Matrix::from_rows({{ka, 0, 0}, {0, kb, 0}, {0, 0, kc}});
  };

  SystemDescription sys;
  sys.kind = SystemKind::Pss;
  const int q = b_shape == BShape::Column ? 1 : 3;
  sys.dims = {3, q, 1};

  Matrix b(3, q);
  if (b_shape == BShape::Column) {
    for (int i = 0; i < 3; ++i) b(i, 0) = 100.0;
  } else {
    for (int i = 0; i < 3; ++i) b(i, i) = 100.0;
  }
  const Matrix c = Matrix::from_rows({{1, 1, 1}});
  const Matrix d(1, q);

  const Matrix a1 = lambda - quarantine(0.5, 0.0, 0.0) + spread_open;
  const Matrix a2 = lambda - quarantine(0.5, 0.0, kc_quarantine) + spread_closed;
  const Matrix a3 = lambda - quarantine(0.5, kb_quarantine, kc_quarantine) + spread_closed;
  sys.modes = {{0, a1, b, c, d}, {1, a2, b, c, d}, {2, a3, b, c, d}};

  sys.graph.nodes = {"v1", "v2", "v3", "v4"};
  sys.graph.mode_count = 3;
  sys.graph.edges = {
      {0, 0, 1},  // v1 -m1-> v2
      {1, 2, 2},  // v2 -m3-> v3
      {2, 2, 2},  // v3 -m3-> v3
      {2, 1, 3},  // v3 -m2-> v4
      {3, 2, 2},  // v4 -m3-> v3
      {3, 0, 0},  // v4 -m1-> v1
  };
  return sys;
}

namespace {

double power_iteration_radius(const Matrix& a) {
  const int n = a.rows();
  std::mt19937_64 rng(987654321);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int restarts = 3;
  const int per_restart = tol::kPowerIterCap / restarts;
  double best_estimate = 0.0;

  for (int attempt = 0; attempt < restarts; ++attempt) {
    Vector v(n);
    for (double& x : v) x = gauss(rng);
    double nv = norm2(v);
    for (double& x : v) x /= nv;

    double estimate = 0.0;
    int settled = 0;
    for (int it = 0; it < per_restart; ++it) {
      Vector w = a * v;
      const double nw = norm2(w);
      if (nw == 0.0) {
        // Iterate fell into the kernel; nilpotent directions end up here.
        estimate = 0.0;
        settled = 3;
        break;
      }
      for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
      if (it > 0 && std::abs(nw - estimate) <= tol::kPowerIterRel * std::max(nw, 1e-300)) {
        if (++settled >= 3) {
          estimate = nw;
          break;
        }
      } else {
        settled = 0;
      }
      estimate = nw;
    }
    if (settled < 3) {
      throw ConvergenceFailure(
          "power iteration did not settle; the dominant eigenvalue may be a complex pair",
          std::max(best_estimate, estimate));
    }
    best_estimate = std::max(best_estimate, estimate);
  }
  return best_estimate;
}

}  // namespace

double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("spectral_radius needs a square matrix");
  if (a.max_abs() == 0.0) return 0.0;
  if (is_symmetric(a)) {
    const Vector eigs = symmetric_eigenvalues(a);
    return std::max(std::abs(eigs.front()), std::abs(eigs.back()));
  }
  return power_iteration_radius(a);
}

}  // namespace conecert
