#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nsac/diffuse_solver.hpp"

namespace nsac {

/// Contents of an NSAC1 snapshot: magic "NSAC1", u32 nx, u32 ny, f64 lx, ly, t,
/// eps, then row-major f64 arrays c, vx, vy, p, all little-endian. vx and vy are
/// the staggered face arrays of MacVelocity (u on x-faces, v on y-faces).
struct Snapshot {
  std::uint32_t nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0, t = 0.0, eps = 0.0;
  std::vector<double> c, vx, vy, p;

  static Snapshot from_state(const DiffuseState& s);
  /// Boundary conditions are not stored; the caller supplies them.
  DiffuseState to_state(BoundaryCondition bc) const;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
/// Throws BadMagic, TruncatedFile, VersionMismatch (other format versions or
/// byte-swapped headers).
Snapshot read_snapshot(const std::filesystem::path& path);

/// Formats a double with 17 significant digits (exact round trip).
std::string format_double(double x);

/// CSV writer that flushes each row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(std::span<const double> values);
  void row(const std::vector<std::string>& cells);

 private:
  std::filesystem::path path_;
};

/// Reads a numeric CSV written by CsvWriter (header line and "#" lines skipped).
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path);

}  // namespace nsac
