#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bhs/field.hpp"

namespace bhs {

// Field snapshot persisted to disk. The on-disk layout is a short UTF-8
// `key: value` header (dim, points, box_length, rep, time and optionally the
// integer step index), a blank line, then the raw sample payload as
// little-endian float64 pairs (re, im) in row-major grid order. Reading back
// a file written by write_checkpoint reproduces the field bit for bit.
struct Checkpoint {
  ComplexField field;
  double time = 1.0;
  std::optional<std::int64_t> step;
};

void write_checkpoint(const std::string& path, const ComplexField& field,
                      double time,
                      std::optional<std::int64_t> step = std::nullopt);

Checkpoint read_checkpoint(const std::string& path);

}  // namespace bhs
