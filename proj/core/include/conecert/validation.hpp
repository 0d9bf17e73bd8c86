#pragma once

#include <string>
#include <vector>

namespace conecert {

// Hard errors fail validation; warnings are surfaced but do not.
struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Outcome of re-checking a certificate edge by edge. Residuals are signed:
// an inequality holds strictly when its residual is negative.
struct EdgeResidual {
  int edge_index = -1;
  double worst_residual = 0.0;
};

struct CheckReport {
  bool pass = false;
  double worst_residual = 0.0;  // most violating value across all edges
  std::vector<EdgeResidual> edges;
  std::vector<std::string> failures;
};

}  // namespace conecert
