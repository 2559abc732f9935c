#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bhs {

// Flat `key: value` configuration with dotted namespaces (grid.points,
// interaction.sigma, scattering.alpha, ...). One file describes one
// experiment. Keys keep their file order, so parse -> serialize -> parse is
// a fixed point; comments (#) and blank lines are dropped by the parser.
class Config {
 public:
  static Config parse_text(const std::string& text);
  static Config load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& key) const;
  // Throwing getters (ValidationError names the missing/malformed key)...
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // space-separated
  // ...and defaulted ones.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Set/overwrite preserving first-seen position for existing keys.
  void set(const std::string& key, const std::string& value);

  // FNV-1a (64-bit) over the sorted physics entries; keys under `output.`
  // are excluded, everything else (seed included) identifies the experiment.
  std::uint64_t physics_hash() const;
  static std::string hash_hex(std::uint64_t h);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace bhs
