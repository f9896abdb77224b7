#include "lrsd/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrsd/error.hpp"
#include "lrsd/sensing.hpp"

namespace lrsd {

Scene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  const FrameGeometry& g = spec.geometry;
  g.validate();
  require(spec.frame_count >= 1, ErrorCode::invalid_argument,
          "scene needs at least one frame");
  require(spec.illumination.empty() ||
              spec.illumination.size() == spec.frame_count,
          ErrorCode::invalid_argument,
          "illumination list must be empty or one entry per frame");
  const std::size_t n = g.pixels();
  const std::size_t J = spec.frame_count;

  Rng rng(seed);
  std::vector<double> still(g.samples());
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t y = 0; y < g.height; ++y) {
      const double fy = g.height > 1 ? double(y) / double(g.height - 1) : 0.0;
      for (std::size_t x = 0; x < g.width; ++x) {
        const double fx = g.width > 1 ? double(x) / double(g.width - 1) : 0.0;
        still[c * n + y * g.width + x] =
            spec.base_level[c] + spec.gradient_x[c] * fx +
            spec.gradient_y[c] * fy + spec.texture_amplitude * rng.normal();
      }
    }
  }

  const auto rows = static_cast<Eigen::Index>(g.samples());
  Matrix background(rows, static_cast<Eigen::Index>(J));
  Matrix video(rows, static_cast<Eigen::Index>(J));
  std::vector<SilhouetteMask> masks(
      J, SilhouetteMask{g.single_channel(), std::vector<std::uint8_t>(n, 0)});

  for (std::size_t j = 0; j < J; ++j) {
    const double illum = spec.illumination.empty() ? 1.0 : spec.illumination[j];
    for (std::size_t i = 0; i < g.samples(); ++i) {
      background(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::clamp(still[i] * illum, 0.0, spec.peak);
    }
    video.col(static_cast<Eigen::Index>(j)) =
        background.col(static_cast<Eigen::Index>(j));

    for (const SpriteSpec& s : spec.sprites) {
      const double px = std::round(s.x0 + s.vx * double(j));
      const double py = std::round(s.y0 + s.vy * double(j));
      if (px < 0 || py < 0 || px + double(s.width) > double(g.width) ||
          py + double(s.height) > double(g.height) || s.width == 0 ||
          s.height == 0) {
        fail(ErrorCode::invalid_argument,
             "sprite leaves the frame at frame " + std::to_string(j));
      }
      const auto x0 = static_cast<std::size_t>(px);
      const auto y0 = static_cast<std::size_t>(py);
      for (std::size_t y = y0; y < y0 + s.height; ++y) {
        for (std::size_t x = x0; x < x0 + s.width; ++x) {
          const std::size_t p = y * g.width + x;
          masks[j].bits[p] = 1;
          for (std::size_t c = 0; c < g.channels; ++c) {
            const auto r = static_cast<Eigen::Index>(c * n + p);
            const auto col = static_cast<Eigen::Index>(j);
            video(r, col) =
                std::clamp(background(r, col) + s.offset[c], 0.0, spec.peak);
          }
        }
      }
    }
  }
  return {VideoVolume(g, std::move(video)), VideoVolume(g, std::move(background)),
          std::move(masks)};
}

SpriteSpec crossing_sprite(const FrameGeometry& geometry,
                           std::size_t frame_count, std::size_t size) {
  require(geometry.width >= size + 8 && geometry.height >= size + 8,
          ErrorCode::invalid_argument, "frame too small for the sprite");
  SpriteSpec s;
  s.width = s.height = size;
  s.x0 = 4.0;
  s.y0 = double(geometry.height) / 4.0;
  const double steps = frame_count > 1 ? double(frame_count - 1) : 1.0;
  s.vx = double(geometry.width - size - 8) / steps;
  s.vy = (double(geometry.height) / 2.0 - double(size) / 2.0) / steps;
  return s;
}

std::vector<double> illumination_step(std::size_t frame_count, double dimmed) {
  std::vector<double> illum(frame_count, 1.0);
  for (std::size_t j = frame_count / 2; j < frame_count; ++j) illum[j] = dimmed;
  return illum;
}

}  // namespace lrsd
