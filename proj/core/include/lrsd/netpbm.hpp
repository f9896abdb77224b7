#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lrsd/detection.hpp"
#include "lrsd/volume.hpp"

namespace lrsd {

/// Clamps to [0, peak] and rounds to the nearest 8-bit level.
std::uint8_t quantize_sample(double value, double peak = 255.0);

/// Binary P5 (grayscale) / P6 (RGB) with maxval 255. `source` names the
/// input in error messages.
PixelFrame decode_pnm(std::string_view bytes, const std::string& source);
std::string encode_pnm(const PixelFrame& frame);

PixelFrame read_pnm(const std::filesystem::path& path);
/// Atomic: writes a temporary sibling and renames it into place.
void write_pnm(const std::filesystem::path& path, const PixelFrame& frame);

/// All *.pgm / *.ppm files of a directory in lexicographic filename order.
std::vector<std::filesystem::path> list_frame_files(
    const std::filesystem::path& dir);
std::vector<PixelFrame> read_frames(const std::filesystem::path& dir);
std::vector<PixelFrame> read_frames(
    const std::vector<std::filesystem::path>& files);

/// Writes <dir>/<stem>_<index>.pgm|ppm with zero-padded indices, creating
/// the directory if needed. Returns the written paths.
std::vector<std::filesystem::path> write_frames(
    const std::vector<PixelFrame>& frames, const std::filesystem::path& dir,
    const std::string& stem = "frame");

/// Masks are P5 images with values {0, 255}; reading maps nonzero to 1.
void write_mask(const std::filesystem::path& path, const SilhouetteMask& mask);
SilhouetteMask read_mask(const std::filesystem::path& path);
std::vector<std::filesystem::path> write_masks(
    const std::vector<SilhouetteMask>& masks, const std::filesystem::path& dir,
    const std::string& stem = "mask");

}  // namespace lrsd
