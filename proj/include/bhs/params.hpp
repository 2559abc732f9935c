#pragma once

#include <string>
#include <vector>

namespace bhs {

// Admissibility checker for the exponent parameters of the scattering
// estimates. Each mode corresponds to one claimed parameter region:
//   thm1               alpha in (0, min{sigma-1, 1/4}), b in (0, alpha)
//   thm2               alpha in (0, 1/2 - 2/n)   (meaningful only for n >= 5)
//   prop21             e = 1/4 + 3/(2 delta), sigma = delta - 1/e > 1,
//                      b in (0, (1-e)/3), alpha in (b, 1-3b)
//   weak_localization  alpha in [1/4, 1/4+epsilon), b = 1/4 - epsilon/3
// The checker never throws: it returns a report naming each inequality with
// its verdict, plus derived quantities (e, sigma, e*delta - 1). In prop21
// mode the thm1 window is reported as well, so the intersection of the two
// claimed regions is visible.
struct ConstraintCheck {
  std::string name;    // short identifier of the inequality
  std::string detail;  // the inequality with numbers substituted
  bool pass = false;
  bool informational = false;  // reported but not counted in the verdict
};

struct ParamInput {
  double alpha = 0.0;
  double b = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  int n = 1;  // space dimension
};

struct ParamReport {
  std::string mode;
  std::vector<ConstraintCheck> checks;
  std::vector<std::pair<std::string, double>> derived;
  bool pass = false;  // AND over non-informational checks
};

ParamReport validate_params(const ParamInput& in, const std::string& mode);

// Multi-line human-readable rendering (one line per check).
std::string param_report_text(const ParamReport& r);

}  // namespace bhs
