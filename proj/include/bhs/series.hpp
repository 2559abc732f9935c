#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bhs/fitting.hpp"

namespace bhs {

// A labelled scalar series against a scale variable (usually time), the
// carrier for every measured decay law. Each series knows its reference
// power-law exponent (when one is claimed), the window used for the
// least-squares log-log fit, and optional extra columns emitted alongside
// the primary value.
struct DiagnosticSeries {
  std::string label;
  std::string scale_name = "t";
  std::vector<double> scales;
  std::vector<double> values;
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> extras;  // extras[k] aligned with scales

  std::optional<double> reference_exponent;
  double fit_lo = 0.0;  // 0/0 means "whole range"
  double fit_hi = 0.0;

  void append(double scale, double value, const std::vector<double>& extra = {});
  std::size_t size() const { return scales.size(); }

  // Effective fit window: declared window, else the full scale range.
  std::pair<double, double> fit_window() const;
};

// Invariants: scales strictly increasing, all entries finite, extras aligned,
// declared fit window inside the sampled range. Throws ValidationError.
void validate_series(const DiagnosticSeries& s);

// Least-squares power-law fit of the series over its fit window.
FitResult fit_series(const DiagnosticSeries& s);

// One CSV block per series:
//   # label: <label>
//   # reference_exponent: <value or none>
//   # fit_window: <lo> <hi>
//   <scale_name>,value[,extra...]
//   <rows at full precision>
std::string series_to_csv(const DiagnosticSeries& s);
void write_series_csv(const std::string& path, const DiagnosticSeries& s);

DiagnosticSeries series_from_csv_text(const std::string& text);
DiagnosticSeries read_series_csv(const std::string& path);

// JSON summary of a fitted series: label, fitted exponent/intercept/residual,
// reference exponent, margin (reference - fitted; positive when the measured
// decay is at least as fast as claimed), pass verdict, endpoint values.
struct SeriesSummary {
  std::string label;
  bool fitted = false;
  FitResult fit;
  std::optional<double> reference_exponent;
  std::optional<double> margin;
  std::optional<bool> pass;
  double first_value = 0.0;
  double final_value = 0.0;
  double peak_value = 0.0;
};

SeriesSummary summarize_series(const DiagnosticSeries& s,
                               std::optional<double> pass_threshold_exponent);
std::string summary_to_json(const SeriesSummary& s);
void write_summary_json(const std::string& path, const SeriesSummary& s);

}  // namespace bhs
