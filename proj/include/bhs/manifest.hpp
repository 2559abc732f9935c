#pragma once
// Experiment manifest: a small text record that makes a finished (or
// interrupted) run self-describing.  It pins the configuration hash, the
// creation timestamp, the code version, the RNG seed, the completion status,
// and the list of artifacts the run produced, each with its byte length so a
// later consumer can detect truncation before parsing anything.

#include <cstdint>
#include <string>
#include <vector>

namespace bhs {

struct ArtifactEntry {
  std::string relpath;  // path relative to the manifest's directory
  std::uint64_t bytes = 0;
};

struct Manifest {
  std::string config_hash;   // hex physics hash of the driving config
  std::string created;       // ISO 8601 UTC, e.g. 2024-05-01T12:30:00Z
  std::string version;       // library version string
  std::uint64_t seed = 0;    // RNG seed recorded for reproducibility
  std::string status;        // running | complete | aborted
  std::vector<ArtifactEntry> artifacts;
};

// Current ISO 8601 UTC timestamp.
std::string iso8601_utc_now();

// Text round-trip ("experiment-manifest v1").
std::string manifest_to_text(const Manifest& m);
Manifest manifest_from_text(const std::string& text);
void save_manifest(const std::string& path, const Manifest& m);
Manifest load_manifest(const std::string& path);

// Checks that every artifact exists under `dir` with the recorded byte
// length.  Returns a list of human-readable problems; empty means verified.
std::vector<std::string> verify_manifest(const std::string& dir,
                                         const Manifest& m);

}  // namespace bhs
