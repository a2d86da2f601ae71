#pragma once

#include <filesystem>
#include <string>

#include "wz/torus/field.hpp"

namespace wz {

/// Binary layout (native little-endian):
///   8 bytes magic "WZSNAP1\0", int32 n, float64 time, uint32 name length, name bytes,
///   n*n float64 values in row-major (i, j) order.
struct Snapshot {
  std::string name;
  double time = 0.0;
  ScalarField field;
};

/// Writes `<dir>/<name>_<step>.bin` and appends a line
/// `file=<file> name=<name> time=<t> n=<n>` to `<dir>/index.txt`. Returns the file path.
std::filesystem::path write_snapshot(const std::filesystem::path& dir, const std::string& name, long step, double time,
                                     const ScalarField& field);

/// Throws std::runtime_error on a malformed file.
Snapshot read_snapshot(const std::filesystem::path& file);

}  // namespace wz
