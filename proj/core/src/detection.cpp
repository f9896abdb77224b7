#include "lrsd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lrsd/error.hpp"

namespace lrsd {

std::size_t SilhouetteMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::vector<double> median_filter(std::span<const double> frame,
                                  const FrameGeometry& geometry, int window) {
  require(window >= 1 && window % 2 == 1, ErrorCode::invalid_argument,
          "median window must be an odd integer >= 1");
  require(frame.size() == geometry.pixels(), ErrorCode::shape_mismatch,
          "median_filter: frame length does not match geometry");
  const auto w = static_cast<long>(geometry.width);
  const auto h = static_cast<long>(geometry.height);
  const long r = window / 2;
  std::vector<double> out(frame.size());
  std::vector<double> hood;
  hood.reserve(static_cast<std::size_t>(window * window));
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      hood.clear();
      for (long dy = -r; dy <= r; ++dy) {
        const long yy = std::clamp(y + dy, 0L, h - 1);
        for (long dx = -r; dx <= r; ++dx) {
          const long xx = std::clamp(x + dx, 0L, w - 1);
          hood.push_back(frame[static_cast<std::size_t>(yy * w + xx)]);
        }
      }
      const auto mid = hood.begin() + static_cast<long>(hood.size() / 2);
      std::nth_element(hood.begin(), mid, hood.end());
      out[static_cast<std::size_t>(y * w + x)] = *mid;
    }
  }
  return out;
}

SilhouetteMask threshold_mask(std::span<const double> frame,
                              const FrameGeometry& geometry, double delta) {
  require(delta > 0.0, ErrorCode::invalid_argument,
          "threshold delta must be positive");
  require(frame.size() == geometry.pixels(), ErrorCode::shape_mismatch,
          "threshold_mask: frame length does not match geometry");
  SilhouetteMask mask{geometry.single_channel(),
                      std::vector<std::uint8_t>(frame.size())};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    mask.bits[i] = std::abs(frame[i]) >= delta ? 1 : 0;
  }
  return mask;
}

std::vector<double> pixel_magnitude(const VideoVolume& volume,
                                    std::size_t index) {
  require(index < volume.frame_count(), ErrorCode::invalid_argument,
          "frame index out of range");
  const std::size_t n = volume.geometry().pixels();
  const std::size_t channels = volume.geometry().channels;
  const auto col = volume.data().col(static_cast<Eigen::Index>(index));
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = col(static_cast<Eigen::Index>(c * n + i));
      sq += v * v;
    }
    mag[i] = channels == 1 ? std::abs(col(static_cast<Eigen::Index>(i)))
                           : std::sqrt(sq);
  }
  return mag;
}

SilhouetteMask silhouette(const VideoVolume& x2, std::size_t index,
                          double delta, int window) {
  const FrameGeometry g = x2.geometry().single_channel();
  return threshold_mask(median_filter(pixel_magnitude(x2, index), g, window),
                        g, delta);
}

double estimate_delta(const VideoVolume& x2, double factor) {
  std::vector<double> values;
  values.reserve(x2.geometry().pixels() * x2.frame_count());
  for (std::size_t j = 0; j < x2.frame_count(); ++j) {
    for (double v : pixel_magnitude(x2, j)) {
      if (v != 0.0) values.push_back(v);
    }
  }
  if (values.empty()) return 0.0;
  const double peak = *std::max_element(values.begin(), values.end());
  const auto mid = values.begin() + static_cast<long>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return std::min(factor * 1.4826 * *mid, 0.5 * peak);
}

double psnr(const Eigen::Ref<const Matrix>& a,
            const Eigen::Ref<const Matrix>& b, double peak) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::shape_mismatch, "psnr: volumes differ in shape");
  require(peak > 0.0, ErrorCode::invalid_argument, "psnr: peak must be positive");
  require(a.size() > 0, ErrorCode::empty_input, "psnr: empty volumes");
  const double mse = (a - b).squaredNorm() / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const VideoVolume& a, const VideoVolume& b, double peak) {
  require(a.geometry() == b.geometry(), ErrorCode::shape_mismatch,
          "psnr: volumes differ in geometry");
  return psnr(a.data(), b.data(), peak);
}

double mask_iou(const SilhouetteMask& a, const SilhouetteMask& b) {
  require(a.geometry == b.geometry && a.bits.size() == b.bits.size(),
          ErrorCode::geometry_mismatch, "mask_iou: masks differ in geometry");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    inter += (a.bits[i] & b.bits[i]);
    uni += (a.bits[i] | b.bits[i]);
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace lrsd
