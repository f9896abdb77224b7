#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "lrsd/volume.hpp"

namespace lrsd {

/// On-disk measurement record. Little-endian layout:
///
///   "LRSDCS01"                                   8 bytes
///   N, M, seed, width, height, channels, frames  7 x u64
///   y[0..M)                                      M x f64
struct MeasurementFile {
  static constexpr char kMagic[9] = "LRSDCS01";
  static constexpr std::size_t kHeaderBytes = 8 + 7 * 8;

  std::uint64_t signal_len = 0;
  std::uint64_t seed = 0;
  FrameGeometry geometry;
  std::uint64_t frame_count = 0;
  Vector y;

  std::uint64_t measurements() const noexcept {
    return static_cast<std::uint64_t>(y.size());
  }

  /// Header consistency: N = channels * n * J and 1 <= M <= N.
  void validate() const;
};

void write_measurements(std::ostream& out, const MeasurementFile& file);
MeasurementFile read_measurements(std::istream& in);

/// Writes to a sibling temporary and renames it into place.
void write_measurements(const std::filesystem::path& path,
                        const MeasurementFile& file);
MeasurementFile read_measurements(const std::filesystem::path& path);

}  // namespace lrsd
