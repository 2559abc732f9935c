#pragma once

#include <string>
#include <vector>

#include "bhs/evolve.hpp"
#include "bhs/field.hpp"
#include "bhs/interaction.hpp"

namespace bhs {

// Propagation-estimate ledger for the time-dependent observable
//   B(t) = F1 Fc F1   (spectral-spatial-spectral sandwich), or
//   C(t) = Fc F1 Fc   (spatial-spectral-spatial sandwich),
// evaluated on phi(t) = exp(+i(t-1)H0) psi(t), with
//   Fc = Fc(|x|/t^alpha <= 1)  and  F1 = F1(t^b |P| > 1).
//
// The Heisenberg derivative splits exactly (for the semi-discrete flow) as
//   d<B>/dt = c1 + c2 + g_remainder + g_interaction
// where c1 and c2 are the manifestly sign-definite terms (both >= 0 by
// construction: they are quadratic forms against the nonnegative time
// derivatives of the cutoffs), g_remainder collects the cross terms left
// after symmetrizing the derivative into those squares, and g_interaction
// is the pairing with the interaction term of the equation. The accumulator
// integrates each term with the trapezoid rule on the observed times and
// tracks the budget defect |<B(t)> - <B(t1)> - Int(c1+c2+g)|.
enum class LedgerKind { F1FcF1, FcF1Fc };

std::string ledger_kind_name(LedgerKind kind);
LedgerKind ledger_kind_from_name(const std::string& name);

struct LedgerRecord {
  double t = 0.0;
  double B = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double g_interaction = 0.0;
  double g_remainder = 0.0;
  double int_c1 = 0.0;
  double int_c2 = 0.0;
  double int_g = 0.0;
  double budget_defect = 0.0;
};

struct LedgerSummary {
  std::size_t observations = 0;
  double norm_ref_sq = 0.0;  // ||psi||^2 at the first observation
  double first_B = 0.0;
  double sup_B = 0.0;
  double min_c1 = 0.0;
  double min_c2 = 0.0;
  double int_c1 = 0.0;
  double int_c2 = 0.0;
  double int_g = 0.0;
  double g_l1 = 0.0;  // trapezoid of |g_interaction + g_remainder|
  double final_defect = 0.0;
  double max_defect = 0.0;
  bool positivity_ok = false;              // min c1, c2 >= -1e-12 * norm_ref_sq
  bool propagation_inequality_ok = false;  // int_c1 <= sup_B + g_l1 (+ slack)
};

class LedgerAccumulator {
 public:
  LedgerAccumulator(LedgerKind kind, double alpha, double b,
                    InteractionSpec interaction);

  // Evaluate all ledger terms at (t, psi(t)) and extend the running
  // integrals. Observations must arrive in time order; a repeated time
  // (resume overlap) is skipped. psi may be in either representation.
  void observe(double t, const ComplexField& psi);

  const std::vector<LedgerRecord>& records() const { return records_; }
  LedgerKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double b() const { return b_; }
  double norm_ref_sq() const { return norm_ref_sq_; }

  LedgerSummary finish() const;

  // Text round trip of the full scalar state; reloading and continuing the
  // observations reproduces the uninterrupted series bit for bit.
  void save(const std::string& path) const;
  static LedgerAccumulator load(const std::string& path,
                                const InteractionSpec& interaction);

 private:
  LedgerKind kind_;
  double alpha_;
  double b_;
  InteractionSpec interaction_;
  double norm_ref_sq_ = -1.0;  // < 0 until the first observation
  std::vector<LedgerRecord> records_;
};

// Post-hoc ledger over every retained sample of a trajectory.
std::vector<LedgerRecord> propagation_ledger(const Trajectory& traj, LedgerKind kind,
                                             double alpha, double b);

LedgerSummary summarize_ledger(const std::vector<LedgerRecord>& records,
                               double norm_ref_sq);

}  // namespace bhs
