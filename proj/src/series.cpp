#include "bhs/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bhs/errors.hpp"

namespace bhs {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  return out;
}

}  // namespace

void DiagnosticSeries::append(double scale, double value,
                              const std::vector<double>& extra) {
  if (extra.size() != extra_names.size())
    throw ValidationError("series '" + label + "': extra column count mismatch");
  if (!scales.empty() && !(scale > scales.back()))
    throw ValidationError("series '" + label + "': scales must be strictly increasing");
  if (extras.size() != extra_names.size()) extras.resize(extra_names.size());
  scales.push_back(scale);
  values.push_back(value);
  for (std::size_t k = 0; k < extra.size(); ++k) extras[k].push_back(extra[k]);
}

std::pair<double, double> DiagnosticSeries::fit_window() const {
  if (fit_lo == 0.0 && fit_hi == 0.0) {
    if (scales.empty()) return {0.0, 0.0};
    return {scales.front(), scales.back()};
  }
  return {fit_lo, fit_hi};
}

void validate_series(const DiagnosticSeries& s) {
  if (s.values.size() != s.scales.size())
    throw ValidationError("series '" + s.label + "': values/scales length mismatch");
  if (s.extras.size() != s.extra_names.size() && !s.extras.empty())
    throw ValidationError("series '" + s.label + "': extras/extra_names mismatch");
  for (const auto& col : s.extras)
    if (col.size() != s.scales.size())
      throw ValidationError("series '" + s.label + "': extra column length mismatch");
  for (std::size_t i = 0; i < s.scales.size(); ++i) {
    if (!std::isfinite(s.scales[i]) || !std::isfinite(s.values[i]))
      throw ValidationError("series '" + s.label + "': non-finite entry");
    if (i > 0 && !(s.scales[i] > s.scales[i - 1]))
      throw ValidationError("series '" + s.label + "': scales must be strictly increasing");
  }
  for (const auto& col : s.extras)
    for (double v : col)
      if (!std::isfinite(v))
        throw ValidationError("series '" + s.label + "': non-finite extra entry");
  if (!(s.fit_lo == 0.0 && s.fit_hi == 0.0)) {
    if (s.scales.empty())
      throw ValidationError("series '" + s.label + "': fit window on empty series");
    if (s.fit_lo < s.scales.front() - 1e-12 || s.fit_hi > s.scales.back() + 1e-12)
      throw ValidationError("series '" + s.label + "': fit window outside sampled range");
  }
}

FitResult fit_series(const DiagnosticSeries& s) {
  validate_series(s);
  const auto [lo, hi] = s.fit_window();
  return fit_exponent(s.scales, s.values, lo, hi);
}

std::string series_to_csv(const DiagnosticSeries& s) {
  std::ostringstream out;
  out << "# label: " << s.label << "\n";
  out << "# reference_exponent: "
      << (s.reference_exponent ? fmt(*s.reference_exponent) : std::string("none"))
      << "\n";
  const auto [lo, hi] = s.fit_window();
  out << "# fit_window: " << fmt(lo) << " " << fmt(hi) << "\n";
  out << s.scale_name << ",value";
  for (const auto& n : s.extra_names) out << "," << n;
  out << "\n";
  for (std::size_t i = 0; i < s.scales.size(); ++i) {
    out << fmt(s.scales[i]) << "," << fmt(s.values[i]);
    for (const auto& col : s.extras) out << "," << fmt(col[i]);
    out << "\n";
  }
  return out.str();
}

void write_series_csv(const std::string& path, const DiagnosticSeries& s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw AbortError("series: cannot open '" + path + "' for writing");
  out << series_to_csv(s);
  if (!out) throw AbortError("series: short write to '" + path + "'");
}

DiagnosticSeries series_from_csv_text(const std::string& text) {
  DiagnosticSeries s;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string val = trim(line.substr(colon + 1));
      if (key == "label") {
        s.label = val;
      } else if (key == "reference_exponent") {
        if (val != "none") s.reference_exponent = std::stod(val);
      } else if (key == "fit_window") {
        std::istringstream w(val);
        if (!(w >> s.fit_lo >> s.fit_hi))
          throw ValidationError("series csv: malformed fit_window line");
      }
      continue;
    }
    auto cells = split_csv(line);
    if (!have_header) {
      if (cells.size() < 2 || cells[1] != "value")
        throw ValidationError("series csv: expected header '<scale>,value[,...]'");
      s.scale_name = cells[0];
      for (std::size_t k = 2; k < cells.size(); ++k) s.extra_names.push_back(cells[k]);
      s.extras.resize(s.extra_names.size());
      have_header = true;
      continue;
    }
    if (cells.size() != 2 + s.extra_names.size())
      throw ValidationError("series csv: row width does not match header");
    std::vector<double> extra;
    for (std::size_t k = 2; k < cells.size(); ++k) extra.push_back(std::stod(cells[k]));
    s.append(std::stod(cells[0]), std::stod(cells[1]), extra);
  }
  if (!have_header) throw ValidationError("series csv: no header row found");
  validate_series(s);
  return s;
}

DiagnosticSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AbortError("series: cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return series_from_csv_text(buf.str());
}

SeriesSummary summarize_series(const DiagnosticSeries& s,
                               std::optional<double> pass_threshold_exponent) {
  validate_series(s);
  SeriesSummary out;
  out.label = s.label;
  out.reference_exponent = s.reference_exponent;
  if (!s.values.empty()) {
    out.first_value = s.values.front();
    out.final_value = s.values.back();
    out.peak_value = s.values.front();
    for (double v : s.values) out.peak_value = std::max(out.peak_value, v);
  }
  try {
    out.fit = fit_series(s);
    out.fitted = true;
  } catch (const ValidationError&) {
    out.fitted = false;  // e.g. an identically-zero null series has no fit
  }
  if (out.fitted && s.reference_exponent)
    out.margin = *s.reference_exponent - out.fit.exponent;
  if (pass_threshold_exponent) {
    if (out.fitted)
      out.pass = out.fit.exponent <= *pass_threshold_exponent;
    else
      out.pass = std::nullopt;
  }
  return out;
}

std::string summary_to_json(const SeriesSummary& s) {
  nlohmann::json j;
  j["label"] = s.label;
  j["fitted"] = s.fitted;
  if (s.fitted) {
    j["fit"]["exponent"] = s.fit.exponent;
    j["fit"]["intercept"] = s.fit.intercept;
    j["fit"]["rms_residual"] = s.fit.rms_residual;
    j["fit"]["points_used"] = s.fit.points_used;
  }
  if (s.reference_exponent) j["reference_exponent"] = *s.reference_exponent;
  if (s.margin) j["margin"] = *s.margin;
  if (s.pass)
    j["pass"] = *s.pass;
  else
    j["pass"] = nullptr;
  j["first_value"] = s.first_value;
  j["final_value"] = s.final_value;
  j["peak_value"] = s.peak_value;
  return j.dump(2) + "\n";
}

void write_summary_json(const std::string& path, const SeriesSummary& s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw AbortError("series: cannot open '" + path + "' for writing");
  out << summary_to_json(s);
  if (!out) throw AbortError("series: short write to '" + path + "'");
}

}  // namespace bhs
