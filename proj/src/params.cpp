#include "bhs/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bhs/errors.hpp"

namespace bhs {
namespace {

std::string fmt(const char* pattern, double a, double c = 0.0, double d = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, c, d);
  return buf;
}

void add_check(ParamReport& r, const std::string& name, const std::string& detail,
               bool pass, bool informational = false) {
  r.checks.push_back({name, detail, pass, informational});
}

void thm1_checks(ParamReport& r, const ParamInput& in, bool informational) {
  const double upper = std::min(in.sigma - 1.0, 0.25);
  add_check(r, "alpha_window",
            fmt("0 < alpha < min{sigma-1, 1/4}: 0 < %g < %g", in.alpha, upper),
            in.alpha > 0.0 && in.alpha < upper, informational);
  add_check(r, "b_window", fmt("0 < b < alpha: 0 < %g < %g", in.b, in.alpha),
            in.b > 0.0 && in.b < in.alpha, informational);
  add_check(r, "sigma_floor", fmt("sigma > 1: %g > 1", in.sigma), in.sigma > 1.0,
            informational);
}

}  // namespace

ParamReport validate_params(const ParamInput& in, const std::string& mode) {
  ParamReport r;
  r.mode = mode;

  if (mode == "thm1") {
    thm1_checks(r, in, false);
  } else if (mode == "thm2") {
    const double upper = 0.5 - 2.0 / std::max(in.n, 1);
    add_check(r, "dimension_floor",
              fmt("n >= 5 for a guaranteed regime: n = %g", double(in.n)), in.n >= 5);
    add_check(r, "alpha_window",
              fmt("0 < alpha < 1/2 - 2/n: 0 < %g < %g", in.alpha, upper),
              in.alpha > 0.0 && in.alpha < upper);
  } else if (mode == "prop21") {
    const double e = 0.25 + 1.5 / in.delta;
    const double sigma_req = in.delta - 1.0 / e;
    const double b_hi = (1.0 - e) / 3.0;
    r.derived.emplace_back("e", e);
    r.derived.emplace_back("sigma_required", sigma_req);
    r.derived.emplace_back("e_delta_minus_1", e * in.delta - 1.0);
    add_check(r, "delta_positive", fmt("delta > 0: %g > 0", in.delta), in.delta > 0.0);
    add_check(r, "sigma_matches",
              fmt("sigma = delta - 1/e: %g = %g", in.sigma, sigma_req),
              std::abs(in.sigma - sigma_req) <= 1e-12 * std::max(1.0, sigma_req));
    add_check(r, "sigma_floor", fmt("sigma > 1: %g > 1", sigma_req), sigma_req > 1.0);
    add_check(r, "b_window", fmt("0 < b < (1-e)/3: 0 < %g < %g", in.b, b_hi),
              in.b > 0.0 && in.b < b_hi);
    add_check(r, "alpha_window",
              fmt("b < alpha < 1 - 3b: %g < %g < %g", in.b, in.alpha, 1.0 - 3.0 * in.b),
              in.alpha > in.b && in.alpha < 1.0 - 3.0 * in.b);
    // The companion window claimed by the channel theorem, for the
    // intersection to be visible in one report.
    thm1_checks(r, in, true);
  } else if (mode == "weak_localization") {
    const double b_req = 0.25 - in.epsilon / 3.0;
    r.derived.emplace_back("b_required", b_req);
    add_check(r, "epsilon_positive", fmt("epsilon > 0: %g > 0", in.epsilon),
              in.epsilon > 0.0);
    add_check(r, "alpha_window",
              fmt("1/4 <= alpha < 1/4 + epsilon: 0.25 <= %g < %g", in.alpha,
                  0.25 + in.epsilon),
              in.alpha >= 0.25 && in.alpha < 0.25 + in.epsilon);
    add_check(r, "b_pinned", fmt("b = 1/4 - epsilon/3: %g = %g", in.b, b_req),
              std::abs(in.b - b_req) <= 1e-12);
  } else {
    throw ValidationError("validate_params: unknown mode '" + mode +
                          "' (expected thm1, thm2, prop21, weak_localization)");
  }

  r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                       [](const ConstraintCheck& c) { return c.pass || c.informational; });
  return r;
}

std::string param_report_text(const ParamReport& r) {
  std::ostringstream out;
  out << "mode: " << r.mode << "\n";
  for (const auto& [k, v] : r.derived) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << "derived " << k << " = " << buf << "\n";
  }
  for (const auto& c : r.checks)
    out << (c.pass ? "PASS " : "FAIL ") << (c.informational ? "(info) " : "") << c.name
        << ": " << c.detail << "\n";
  out << (r.pass ? "admissible" : "inadmissible") << "\n";
  return out.str();
}

}  // namespace bhs
