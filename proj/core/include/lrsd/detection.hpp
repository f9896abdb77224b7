#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lrsd/volume.hpp"

namespace lrsd {

/// Binary foreground mask of one frame; bits are 0 or 1.
struct SilhouetteMask {
  FrameGeometry geometry;  // single channel
  std::vector<std::uint8_t> bits;

  std::size_t count() const;
  bool operator==(const SilhouetteMask&) const = default;
};

/// window x window median with replicated borders. window must be odd.
std::vector<double> median_filter(std::span<const double> frame,
                                  const FrameGeometry& geometry, int window);

/// bit = 1 iff |value| >= delta; delta must be positive.
SilhouetteMask threshold_mask(std::span<const double> frame,
                              const FrameGeometry& geometry, double delta);

/// Per-pixel magnitude of frame `index`: |x| for grayscale, the 2-norm
/// across the colour planes for RGB.
std::vector<double> pixel_magnitude(const VideoVolume& volume,
                                    std::size_t index);

/// threshold_mask(median_filter(magnitude of frame `index` of x2)).
SilhouetteMask silhouette(const VideoVolume& x2, std::size_t index,
                          double delta, int window = 3);

/// factor * 1.4826 * median of the nonzero per-pixel magnitudes of x2 (a
/// robust noise scale), capped at half the largest magnitude so that a
/// foreground with almost no small nonzero entries, such as a quantized
/// export, still yields masks. Returns 0 when x2 is identically zero.
double estimate_delta(const VideoVolume& x2, double factor = 5.0);

/// 10 log10(peak^2 / MSE); +infinity when MSE is zero.
double psnr(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
            double peak = 255.0);
double psnr(const VideoVolume& a, const VideoVolume& b, double peak = 255.0);

/// |a and b| / |a or b|, defined as 1 when both masks are empty.
double mask_iou(const SilhouetteMask& a, const SilhouetteMask& b);

}  // namespace lrsd
