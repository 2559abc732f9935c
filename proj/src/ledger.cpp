#include "bhs/ledger.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bhs/cutoff.hpp"
#include "bhs/errors.hpp"
#include "bhs/spectral.hpp"

namespace bhs {
namespace {

constexpr double kTimeTol = 1e-9;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ComplexField mul_table(const ComplexField& f, const std::vector<double>& table) {
  ComplexField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= table[i];
  return out;
}

struct Terms {
  double B, c1, c2, g_int, g_rem;
};

// All inner products are the unitary lattice ones: position sums carry the
// cell volume, spectral sums carry dq/(2 pi) per axis, so the two sides agree
// to FFT rounding and the Heisenberg identity closes.
Terms evaluate_terms(LedgerKind kind, double alpha, double b,
                     const InteractionSpec& inter, double t,
                     const ComplexField& psi_pos) {
  const GridSpec& grid = psi_pos.grid();
  const double vol = grid.cell_volume();
  const double scell = grid.spectral_cell();
  const std::size_t n = grid.size();

  const CutoffSpec fc = spatial_inside_radial(alpha);
  const CutoffSpec f1 = spectral_outside_radial(b);

  const std::vector<double> Fc = cutoff_table(fc, grid, t);
  const std::vector<double> Fc_dot = cutoff_ddt_table(fc, grid, t);
  const std::vector<double> F1 = cutoff_table(f1, grid, t);
  const std::vector<double> F1_dot = cutoff_ddt_table(f1, grid, t);

  ComplexField psi_hat = to_spectrum(psi_pos);
  ComplexField phi_hat = free_propagate(psi_hat, -(t - 1.0));  // stays spectral

  const bool has_v = inter.kind != InteractionKind::None;
  Terms out{0.0, 0.0, 0.0, 0.0, 0.0};

  if (kind == LedgerKind::F1FcF1) {
    // w = F1 phi (position); <B> and c1 are position forms against Fc, Fc_dot.
    ComplexField w = from_spectrum(mul_table(phi_hat, F1));
    double B = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a2 = std::norm(w[i]);
      B += Fc[i] * a2;
      c1 += Fc_dot[i] * a2;
    }
    out.B = vol * B;
    out.c1 = vol * c1;

    // c2 = 2 <sqrt(Fc) phi, (F1 F1dot)(P) sqrt(Fc) phi>.
    ComplexField phi = from_spectrum(phi_hat);
    const std::vector<double> sqrtFc = cutoff_sqrt_table(fc, grid, t);
    ComplexField u_hat = to_spectrum(mul_table(phi, sqrtFc));
    double c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) c2 += F1[i] * F1_dot[i] * std::norm(u_hat[i]);
    out.c2 = 2.0 * scell * c2;

    // g_rem = 2 Re <F1dot phi, Fc w> - c2.
    ComplexField r = from_spectrum(mul_table(phi_hat, F1_dot));
    std::complex<double> pair(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) pair += std::conj(r[i]) * (Fc[i] * w[i]);
    out.g_rem = 2.0 * vol * pair.real() - out.c2;

    // g_int = 2 Im <phi, F1 Fc F1 s>, s = exp(+i(t-1)H0) (N psi).
    if (has_v) {
      ComplexField s_hat =
          free_propagate(to_spectrum(interaction_apply(inter, psi_pos, t)), -(t - 1.0));
      ComplexField w2 = from_spectrum(mul_table(s_hat, F1));
      std::complex<double> ip(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) ip += std::conj(w[i]) * (Fc[i] * w2[i]);
      out.g_int = 2.0 * vol * ip.imag();
    }
  } else {
    // v = Fc phi; <B> and c1 are spectral forms against F1, F1_dot.
    ComplexField phi = from_spectrum(phi_hat);
    ComplexField v = mul_table(phi, Fc);
    ComplexField v_hat = to_spectrum(v);
    double B = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a2 = std::norm(v_hat[i]);
      B += F1[i] * a2;
      c1 += F1_dot[i] * a2;
    }
    out.B = scell * B;
    out.c1 = scell * c1;

    // c2 = 2 <sqrt(F1) phi, (Fc Fc_dot)(x) sqrt(F1) phi>.
    const std::vector<double> sqrtF1 = cutoff_sqrt_table(f1, grid, t);
    ComplexField u = from_spectrum(mul_table(phi_hat, sqrtF1));
    double c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) c2 += Fc[i] * Fc_dot[i] * std::norm(u[i]);
    out.c2 = 2.0 * vol * c2;

    // g_rem = 2 Re <Fc_dot phi, F1 v> - c2.
    ComplexField y = from_spectrum(mul_table(v_hat, F1));
    std::complex<double> pair(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      pair += std::conj(Fc_dot[i] * phi[i]) * y[i];
    out.g_rem = 2.0 * vol * pair.real() - out.c2;

    // g_int = 2 Im <v, F1 Fc s> in the spectral form.
    if (has_v) {
      ComplexField s_hat =
          free_propagate(to_spectrum(interaction_apply(inter, psi_pos, t)), -(t - 1.0));
      ComplexField v2_hat = to_spectrum(mul_table(from_spectrum(s_hat), Fc));
      std::complex<double> ip(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        ip += F1[i] * std::conj(v_hat[i]) * v2_hat[i];
      out.g_int = 2.0 * scell * ip.imag();
    }
  }
  return out;
}

}  // namespace

std::string ledger_kind_name(LedgerKind kind) {
  return kind == LedgerKind::F1FcF1 ? "F1FcF1" : "FcF1Fc";
}

LedgerKind ledger_kind_from_name(const std::string& name) {
  if (name == "F1FcF1") return LedgerKind::F1FcF1;
  if (name == "FcF1Fc") return LedgerKind::FcF1Fc;
  throw ValidationError("ledger: unknown kind '" + name + "'");
}

LedgerAccumulator::LedgerAccumulator(LedgerKind kind, double alpha, double b,
                                     InteractionSpec interaction)
    : kind_(kind), alpha_(alpha), b_(b), interaction_(std::move(interaction)) {
  if (!(alpha > 0.0) || !(b > 0.0))
    throw ValidationError("ledger: alpha and b must be positive");
  validate_interaction(interaction_);
}

void LedgerAccumulator::observe(double t, const ComplexField& psi) {
  if (!(t >= 1.0)) throw ValidationError("ledger: t must be >= 1");
  if (!records_.empty()) {
    const double last = records_.back().t;
    if (t <= last + kTimeTol) {
      if (t >= last - kTimeTol) return;  // resume overlap: same time, skip
      throw ValidationError("ledger: observations must be in increasing time order");
    }
  }
  ComplexField psi_pos = psi.rep() == FieldRep::Position ? psi : from_spectrum(psi);
  if (norm_ref_sq_ < 0.0) {
    const double nrm = l2_norm(psi_pos);
    norm_ref_sq_ = nrm * nrm;
  }

  const Terms terms = evaluate_terms(kind_, alpha_, b_, interaction_, t, psi_pos);

  LedgerRecord rec;
  rec.t = t;
  rec.B = terms.B;
  rec.c1 = terms.c1;
  rec.c2 = terms.c2;
  rec.g_interaction = terms.g_int;
  rec.g_remainder = terms.g_rem;
  if (records_.empty()) {
    rec.int_c1 = rec.int_c2 = rec.int_g = 0.0;
  } else {
    const LedgerRecord& p = records_.back();
    const double h = 0.5 * (t - p.t);
    rec.int_c1 = p.int_c1 + h * (p.c1 + rec.c1);
    rec.int_c2 = p.int_c2 + h * (p.c2 + rec.c2);
    rec.int_g = p.int_g + h * ((p.g_interaction + p.g_remainder) +
                               (rec.g_interaction + rec.g_remainder));
  }
  const double first_B = records_.empty() ? rec.B : records_.front().B;
  rec.budget_defect =
      std::abs(rec.B - first_B - (rec.int_c1 + rec.int_c2 + rec.int_g));
  records_.push_back(rec);
}

LedgerSummary LedgerAccumulator::finish() const {
  return summarize_ledger(records_, norm_ref_sq_);
}

LedgerSummary summarize_ledger(const std::vector<LedgerRecord>& records,
                               double norm_ref_sq) {
  if (records.empty()) throw ValidationError("ledger: no observations to summarize");
  LedgerSummary s;
  s.observations = records.size();
  s.norm_ref_sq = norm_ref_sq;
  s.first_B = records.front().B;
  s.sup_B = records.front().B;
  s.min_c1 = records.front().c1;
  s.min_c2 = records.front().c2;
  for (const auto& r : records) {
    s.sup_B = std::max(s.sup_B, r.B);
    s.min_c1 = std::min(s.min_c1, r.c1);
    s.min_c2 = std::min(s.min_c2, r.c2);
    s.max_defect = std::max(s.max_defect, r.budget_defect);
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& p = records[i - 1];
    const auto& r = records[i];
    s.g_l1 += 0.5 * (r.t - p.t) *
              (std::abs(p.g_interaction + p.g_remainder) +
               std::abs(r.g_interaction + r.g_remainder));
  }
  s.int_c1 = records.back().int_c1;
  s.int_c2 = records.back().int_c2;
  s.int_g = records.back().int_g;
  s.final_defect = records.back().budget_defect;
  const double tol = 1e-12 * std::max(norm_ref_sq, 0.0);
  s.positivity_ok = s.min_c1 >= -tol && s.min_c2 >= -tol;
  s.propagation_inequality_ok =
      s.int_c1 <= s.sup_B + s.g_l1 + 1e-9 * std::max(norm_ref_sq, 1.0);
  return s;
}

void LedgerAccumulator::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw AbortError("ledger: cannot open '" + path + "' for writing");
  out << "format: ledger-state v1\n";
  out << "kind: " << ledger_kind_name(kind_) << "\n";
  out << "alpha: " << fmt(alpha_) << "\n";
  out << "b: " << fmt(b_) << "\n";
  out << "norm_ref_sq: " << fmt(norm_ref_sq_) << "\n";
  out << "records: " << records_.size() << "\n";
  out << "\n";
  out << "t,B,c1,c2,g_interaction,g_remainder,int_c1,int_c2,int_g,budget_defect\n";
  for (const auto& r : records_) {
    out << fmt(r.t) << "," << fmt(r.B) << "," << fmt(r.c1) << "," << fmt(r.c2) << ","
        << fmt(r.g_interaction) << "," << fmt(r.g_remainder) << "," << fmt(r.int_c1)
        << "," << fmt(r.int_c2) << "," << fmt(r.int_g) << ","
        << fmt(r.budget_defect) << "\n";
  }
  if (!out) throw AbortError("ledger: short write to '" + path + "'");
}

LedgerAccumulator LedgerAccumulator::load(const std::string& path,
                                          const InteractionSpec& interaction) {
  std::ifstream in(path);
  if (!in) throw AbortError("ledger: cannot open '" + path + "' for reading");
  std::string line;
  LedgerKind kind = LedgerKind::F1FcF1;
  double alpha = 0.0, b = 0.0, norm_ref = -1.0;
  std::size_t count = 0;
  bool in_header = true;
  while (in_header && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ValidationError("ledger: malformed header line '" + line + "'");
    const std::string key = line.substr(0, colon);
    std::istringstream val(line.substr(colon + 1));
    if (key == "kind") {
      std::string name;
      val >> name;
      kind = ledger_kind_from_name(name);
    } else if (key == "alpha") {
      val >> alpha;
    } else if (key == "b") {
      val >> b;
    } else if (key == "norm_ref_sq") {
      val >> norm_ref;
    } else if (key == "records") {
      val >> count;
    }
  }
  LedgerAccumulator acc(kind, alpha, b, interaction);
  acc.norm_ref_sq_ = norm_ref;

  if (!std::getline(in, line))
    throw ValidationError("ledger: missing column header in '" + path + "'");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    LedgerRecord r;
    double* slots[10] = {&r.t,     &r.B,      &r.c1,    &r.c2,   &r.g_interaction,
                         &r.g_remainder, &r.int_c1, &r.int_c2, &r.int_g,
                         &r.budget_defect};
    std::istringstream row(line);
    std::string cell;
    for (int k = 0; k < 10; ++k) {
      if (!std::getline(row, cell, ','))
        throw ValidationError("ledger: short row in '" + path + "'");
      *slots[k] = std::stod(cell);
    }
    acc.records_.push_back(r);
  }
  if (acc.records_.size() != count)
    throw ValidationError("ledger: record count mismatch in '" + path + "'");
  return acc;
}

std::vector<LedgerRecord> propagation_ledger(const Trajectory& traj, LedgerKind kind,
                                             double alpha, double b) {
  LedgerAccumulator acc(kind, alpha, b, traj.config().interaction);
  for (const auto& s : traj.samples()) acc.observe(s.t, s.field);
  return acc.records();
}

}  // namespace bhs
