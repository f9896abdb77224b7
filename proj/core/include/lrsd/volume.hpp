#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lrsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Spatial shape of one frame. `channels` is 1 (grayscale) or 3 (RGB).
struct FrameGeometry {
  std::size_t width = 1;
  std::size_t height = 1;
  std::size_t channels = 1;

  /// Pixels per frame (n).
  std::size_t pixels() const noexcept { return width * height; }
  /// Rows of a frame column: channels * n.
  std::size_t samples() const noexcept { return channels * pixels(); }

  FrameGeometry single_channel() const noexcept { return {width, height, 1}; }

  void validate() const;

  bool operator==(const FrameGeometry&) const = default;
};

/// One decoded image. Samples are planar: the whole R plane, then G, then B,
/// each plane row-major. Grayscale frames hold a single plane.
struct PixelFrame {
  FrameGeometry geometry;
  std::vector<double> samples;
  double peak = 255.0;

  PixelFrame() = default;
  PixelFrame(FrameGeometry g, std::vector<double> s, double peak_value = 255.0);

  double& at(std::size_t channel, std::size_t y, std::size_t x) {
    return samples[channel * geometry.pixels() + y * geometry.width + x];
  }
  double at(std::size_t channel, std::size_t y, std::size_t x) const {
    return samples[channel * geometry.pixels() + y * geometry.width + x];
  }

  bool operator==(const PixelFrame&) const = default;
};

/// A video volume: column j is frame j vectorized (row-major pixels, colour
/// planes stacked R, G, B). Immutable once built.
class VideoVolume {
 public:
  VideoVolume() = default;
  VideoVolume(FrameGeometry geometry, Matrix data);

  static VideoVolume zeros(FrameGeometry geometry, std::size_t frame_count);

  const FrameGeometry& geometry() const noexcept { return geometry_; }
  std::size_t frame_count() const noexcept {
    return static_cast<std::size_t>(data_.cols());
  }
  /// Total entries, channels * n * J.
  std::size_t entry_count() const noexcept {
    return static_cast<std::size_t>(data_.size());
  }
  const Matrix& data() const noexcept { return data_; }

  /// Column-major concatenation of frames; this is the vector the sensing
  /// operator acts on.
  Eigen::Map<const Vector> vectorized() const {
    return {data_.data(), data_.size()};
  }

 private:
  FrameGeometry geometry_{};
  Matrix data_;
};

VideoVolume volume_from_frames(std::span<const PixelFrame> frames);

/// Inverse of volume_from_frames. No clamping is applied here.
std::vector<PixelFrame> volume_to_frames(const VideoVolume& volume,
                                         double peak = 255.0);

VideoVolume stack_color(const VideoVolume& r, const VideoVolume& g,
                        const VideoVolume& b);
std::array<VideoVolume, 3> unstack_color(const VideoVolume& rgb);

/// Rec.601 luma of an RGB frame; grayscale frames are returned unchanged.
PixelFrame to_luminance(const PixelFrame& frame);

/// Crops every channel to the rectangle [x0, x0+width) x [y0, y0+height).
PixelFrame crop(const PixelFrame& frame, std::size_t x0, std::size_t y0,
                std::size_t width, std::size_t height);

}  // namespace lrsd
