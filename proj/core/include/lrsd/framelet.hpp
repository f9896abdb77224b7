#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lrsd/volume.hpp"

namespace lrsd {

/// Coefficients of one frame: 9 subbands of n values each, subband 3*a + b
/// holding the response to mask a along x (horizontal) and mask b along y.
struct FrameletCoeffs {
  FrameGeometry geometry;  // single channel
  std::vector<double> data;

  std::span<const double> band(std::size_t k) const {
    return std::span<const double>(data).subspan(k * geometry.pixels(),
                                                 geometry.pixels());
  }
  std::span<double> band(std::size_t k) {
    return std::span<double>(data).subspan(k * geometry.pixels(),
                                           geometry.pixels());
  }
};

/// Single-level undecimated piecewise-linear B-spline framelet with
/// half-sample symmetric boundary extension. Masks
///
///   h0 = (1, 2, 1) / 4,  h1 = sqrt(2)/4 (1, 0, -1),  h2 = (-1, 2, -1) / 4
///
/// satisfy sum_k H_k^T H_k = I under that boundary rule, so the 2-D tensor
/// frame W obeys W^T W = I and synthesize() is an exact left inverse.
class FrameletTransform {
 public:
  static constexpr std::size_t kSubbands = 9;
  using Mask = std::array<double, 3>;

  explicit FrameletTransform(FrameGeometry geometry);

  static const std::array<Mask, 3>& masks();

  /// Geometry of one channel plane.
  const FrameGeometry& geometry() const noexcept { return geometry_; }
  std::size_t coefficient_count() const noexcept {
    return kSubbands * geometry_.pixels();
  }

  FrameletCoeffs analyze(std::span<const double> frame) const;
  std::vector<double> synthesize(const FrameletCoeffs& coeffs) const;

  void analyze_into(std::span<const double> frame,
                    std::span<double> coeffs) const;
  void synthesize_into(std::span<const double> coeffs,
                       std::span<double> frame) const;

  /// Column-wise transform of a (c*n) x J matrix, c in {1, 3}; colour planes
  /// are transformed independently and stacked into (c*9n) x J.
  Matrix analyze_volume(const Eigen::Ref<const Matrix>& x) const;
  Matrix analyze_volume(const VideoVolume& x) const {
    return analyze_volume(x.data());
  }
  /// Adjoint (and left inverse) of analyze_volume.
  Matrix synthesize_volume(const Eigen::Ref<const Matrix>& c) const;

 private:
  std::size_t channels_of_volume(Eigen::Index rows) const;
  std::size_t channels_of_coeffs(Eigen::Index rows) const;

  FrameGeometry geometry_;
};

}  // namespace lrsd
