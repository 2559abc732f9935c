#include "bhs/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhs/errors.hpp"

namespace bhs {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_status(const std::string& s) {
  return s == "running" || s == "complete" || s == "aborted";
}

}  // namespace

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

std::string manifest_to_text(const Manifest& m) {
  if (!valid_status(m.status))
    throw ValidationError("manifest: invalid status '" + m.status + "'");
  std::ostringstream out;
  out << "format: experiment-manifest v1\n";
  out << "config_hash: " << m.config_hash << "\n";
  out << "created: " << m.created << "\n";
  out << "version: " << m.version << "\n";
  out << "seed: " << m.seed << "\n";
  out << "status: " << m.status << "\n";
  for (const auto& a : m.artifacts)
    out << "artifact: " << a.relpath << " " << a.bytes << "\n";
  return out.str();
}

Manifest manifest_from_text(const std::string& text) {
  Manifest m;
  bool saw_format = false, saw_hash = false, saw_created = false,
       saw_version = false, saw_seed = false, saw_status = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto colon = stripped.find(':');
    if (colon == std::string::npos)
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": expected 'key: value'");
    const std::string key = trim(stripped.substr(0, colon));
    const std::string value = trim(stripped.substr(colon + 1));
    if (key == "format") {
      if (value != "experiment-manifest v1")
        throw ValidationError("manifest: unsupported format '" + value + "'");
      saw_format = true;
    } else if (key == "config_hash") {
      m.config_hash = value;
      saw_hash = true;
    } else if (key == "created") {
      m.created = value;
      saw_created = true;
    } else if (key == "version") {
      m.version = value;
      saw_version = true;
    } else if (key == "seed") {
      try {
        m.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw ValidationError("manifest: bad seed '" + value + "'");
      }
      saw_seed = true;
    } else if (key == "status") {
      if (!valid_status(value))
        throw ValidationError("manifest: invalid status '" + value + "'");
      m.status = value;
      saw_status = true;
    } else if (key == "artifact") {
      const auto space = value.find_last_of(' ');
      if (space == std::string::npos)
        throw ValidationError("manifest line " + std::to_string(line_no) +
                              ": artifact needs '<relpath> <bytes>'");
      ArtifactEntry a;
      a.relpath = trim(value.substr(0, space));
      const std::string bytes_str = trim(value.substr(space + 1));
      try {
        a.bytes = std::stoull(bytes_str);
      } catch (const std::exception&) {
        throw ValidationError("manifest line " + std::to_string(line_no) +
                              ": bad artifact byte count '" + bytes_str + "'");
      }
      if (a.relpath.empty())
        throw ValidationError("manifest line " + std::to_string(line_no) +
                              ": empty artifact path");
      m.artifacts.push_back(std::move(a));
    }
    // Unknown keys are ignored for forward compatibility.
  }
  if (!saw_format) throw ValidationError("manifest: missing format line");
  if (!saw_hash || !saw_created || !saw_version || !saw_seed || !saw_status)
    throw ValidationError("manifest: incomplete header");
  return m;
}

void save_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw AbortError("manifest: cannot open '" + path + "' for writing");
  out << manifest_to_text(m);
  if (!out) throw AbortError("manifest: short write to '" + path + "'");
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("manifest: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_text(buf.str());
}

std::vector<std::string> verify_manifest(const std::string& dir,
                                         const Manifest& m) {
  namespace fs = std::filesystem;
  std::vector<std::string> problems;
  for (const auto& a : m.artifacts) {
    const fs::path p = fs::path(dir) / a.relpath;
    std::error_code ec;
    if (!fs::exists(p, ec) || ec) {
      problems.push_back("missing artifact: " + a.relpath);
      continue;
    }
    const auto size = fs::file_size(p, ec);
    if (ec) {
      problems.push_back("unreadable artifact: " + a.relpath);
      continue;
    }
    if (size != a.bytes)
      problems.push_back("size mismatch for " + a.relpath + ": manifest says " +
                         std::to_string(a.bytes) + ", file has " +
                         std::to_string(size));
  }
  return problems;
}

}  // namespace bhs
