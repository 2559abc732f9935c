#include "bhs/config.hpp"

#include <algorithm>
#include <cstdio>
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

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto colon = stripped.find(':');
    if (colon == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected 'key: value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, colon));
    const std::string value = trim(stripped.substr(colon + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << ": " << v << "\n";
  return out.str();
}

void Config::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw AbortError("config: cannot open '" + path + "' for writing");
  out << serialize();
  if (!out) throw AbortError("config: short write to '" + path + "'");
}

bool Config::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

std::string Config::get_string(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw ValidationError("config: missing required key '" + key + "'");
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ValidationError("config: key '" + key + "' is not a number: '" + v + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ValidationError("config: key '" + key + "' is not an integer: '" + v + "'");
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config: key '" + key + "' is not a boolean: '" + v + "'");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof())
    throw ValidationError("config: key '" + key + "' is not a list of numbers");
  if (out.empty())
    throw ValidationError("config: key '" + key + "' is an empty list");
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_)
    if (e.first == key) {
      e.second = value;
      return;
    }
  entries_.emplace_back(key, value);
}

std::uint64_t Config::physics_hash() const {
  std::vector<std::pair<std::string, std::string>> sorted;
  for (const auto& e : entries_)
    if (e.first.rfind("output.", 0) != 0) sorted.push_back(e);
  std::sort(sorted.begin(), sorted.end());

  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64-bit offset basis
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= '\n';
    h *= 0x100000001b3ull;
  };
  for (const auto& [k, v] : sorted) {
    mix(k);
    mix(v);
  }
  return h;
}

std::string Config::hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bhs
