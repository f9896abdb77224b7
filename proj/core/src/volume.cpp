#include "lrsd/volume.hpp"

#include <string>

#include "lrsd/error.hpp"

namespace lrsd {

void FrameGeometry::validate() const {
  require(width >= 1 && height >= 1, ErrorCode::invalid_argument,
          "frame width and height must be at least 1");
  require(channels == 1 || channels == 3, ErrorCode::invalid_argument,
          "frame channel count must be 1 or 3");
}

PixelFrame::PixelFrame(FrameGeometry g, std::vector<double> s,
                       double peak_value)
    : geometry(g), samples(std::move(s)), peak(peak_value) {
  geometry.validate();
  require(samples.size() == geometry.samples(), ErrorCode::shape_mismatch,
          "pixel frame sample count does not match its geometry");
}

VideoVolume::VideoVolume(FrameGeometry geometry, Matrix data)
    : geometry_(geometry), data_(std::move(data)) {
  geometry_.validate();
  require(static_cast<std::size_t>(data_.rows()) == geometry_.samples(),
          ErrorCode::shape_mismatch,
          "volume row count must equal channels * width * height");
  require(data_.cols() >= 1, ErrorCode::empty_input,
          "volume must hold at least one frame");
}

VideoVolume VideoVolume::zeros(FrameGeometry geometry,
                               std::size_t frame_count) {
  geometry.validate();
  return {geometry,
          Matrix::Zero(static_cast<Eigen::Index>(geometry.samples()),
                       static_cast<Eigen::Index>(frame_count))};
}

VideoVolume volume_from_frames(std::span<const PixelFrame> frames) {
  require(!frames.empty(), ErrorCode::empty_input,
          "cannot build a volume from an empty frame list");
  const FrameGeometry geometry = frames.front().geometry;
  geometry.validate();
  Matrix data(static_cast<Eigen::Index>(geometry.samples()),
              static_cast<Eigen::Index>(frames.size()));
  for (std::size_t j = 0; j < frames.size(); ++j) {
    const PixelFrame& f = frames[j];
    if (!(f.geometry == geometry)) {
      fail(ErrorCode::geometry_mismatch,
           "frame " + std::to_string(j) + " geometry differs from frame 0");
    }
    require(f.samples.size() == geometry.samples(), ErrorCode::shape_mismatch,
            "pixel frame sample count does not match its geometry");
    data.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Vector>(f.samples.data(),
                                 static_cast<Eigen::Index>(f.samples.size()));
  }
  return {geometry, std::move(data)};
}

std::vector<PixelFrame> volume_to_frames(const VideoVolume& volume,
                                         double peak) {
  std::vector<PixelFrame> frames;
  frames.reserve(volume.frame_count());
  const Matrix& d = volume.data();
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    std::vector<double> s(d.col(j).data(), d.col(j).data() + d.rows());
    frames.emplace_back(volume.geometry(), std::move(s), peak);
  }
  return frames;
}

VideoVolume stack_color(const VideoVolume& r, const VideoVolume& g,
                        const VideoVolume& b) {
  const FrameGeometry geometry = r.geometry();
  for (const VideoVolume* v : {&r, &g, &b}) {
    require(v->geometry().channels == 1, ErrorCode::shape_mismatch,
            "stack_color expects single-channel volumes");
    require(v->geometry() == geometry && v->frame_count() == r.frame_count(),
            ErrorCode::shape_mismatch,
            "stack_color inputs must share geometry and frame count");
  }
  const Eigen::Index n = r.data().rows();
  Matrix data(3 * n, r.data().cols());
  data.topRows(n) = r.data();
  data.middleRows(n, n) = g.data();
  data.bottomRows(n) = b.data();
  return {{geometry.width, geometry.height, 3}, std::move(data)};
}

std::array<VideoVolume, 3> unstack_color(const VideoVolume& rgb) {
  require(rgb.geometry().channels == 3, ErrorCode::shape_mismatch,
          "unstack_color expects a three-channel volume");
  const FrameGeometry mono = rgb.geometry().single_channel();
  const Eigen::Index n = static_cast<Eigen::Index>(mono.pixels());
  return {VideoVolume(mono, rgb.data().topRows(n)),
          VideoVolume(mono, rgb.data().middleRows(n, n)),
          VideoVolume(mono, rgb.data().bottomRows(n))};
}

PixelFrame to_luminance(const PixelFrame& frame) {
  if (frame.geometry.channels == 1) return frame;
  const std::size_t n = frame.geometry.pixels();
  std::vector<double> luma(n);
  for (std::size_t i = 0; i < n; ++i) {
    luma[i] = 0.299 * frame.samples[i] + 0.587 * frame.samples[n + i] +
              0.114 * frame.samples[2 * n + i];
  }
  return {frame.geometry.single_channel(), std::move(luma), frame.peak};
}

PixelFrame crop(const PixelFrame& frame, std::size_t x0, std::size_t y0,
                std::size_t width, std::size_t height) {
  const FrameGeometry& g = frame.geometry;
  require(width >= 1 && height >= 1 && x0 + width <= g.width &&
              y0 + height <= g.height,
          ErrorCode::invalid_argument, "crop rectangle outside the frame");
  FrameGeometry out{width, height, g.channels};
  std::vector<double> s(out.samples());
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        s[c * out.pixels() + y * width + x] = frame.at(c, y0 + y, x0 + x);
      }
    }
  }
  return {out, std::move(s), frame.peak};
}

}  // namespace lrsd
