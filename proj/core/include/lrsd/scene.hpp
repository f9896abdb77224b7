#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrsd/detection.hpp"
#include "lrsd/volume.hpp"

namespace lrsd {

/// Axis-aligned rectangle whose top-left corner moves linearly:
/// (round(x0 + vx j), round(y0 + vy j)) in frame j. Inside it, `offset` (per
/// channel) is added to the illuminated background.
struct SpriteSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  std::size_t width = 8;
  std::size_t height = 8;
  double vx = 0.0;
  double vy = 0.0;
  std::array<double, 3> offset = {70.0, 70.0, 70.0};
};

/// Static background (level + linear gradient + fixed seeded texture), scaled
/// per frame by `illumination`, with sprites composited on top.
struct SceneSpec {
  FrameGeometry geometry{64, 64, 1};
  std::size_t frame_count = 20;
  std::array<double, 3> base_level = {70.0, 80.0, 60.0};
  /// Gradient amplitude across the full width / height, per channel.
  std::array<double, 3> gradient_x = {60.0, 40.0, 50.0};
  std::array<double, 3> gradient_y = {30.0, 45.0, 20.0};
  double texture_amplitude = 6.0;
  std::vector<SpriteSpec> sprites;
  /// Per-frame scale; empty means 1 for every frame.
  std::vector<double> illumination;
  double peak = 255.0;
};

struct Scene {
  VideoVolume volume;
  VideoVolume background;  // ground-truth low-rank part (illuminated)
  std::vector<SilhouetteMask> masks;
};

/// Deterministic for a given (spec, seed). Fails if a sprite leaves the frame
/// or the illumination list has the wrong length.
Scene generate_scene(const SceneSpec& spec, std::uint64_t seed);

/// One 8x8 sprite crossing the frame left to right and drifting downward.
SpriteSpec crossing_sprite(const FrameGeometry& geometry,
                           std::size_t frame_count, std::size_t size = 8);

/// 1.0 for the first half of the frames, `dimmed` afterwards.
std::vector<double> illumination_step(std::size_t frame_count, double dimmed);

}  // namespace lrsd
