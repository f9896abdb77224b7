#include "lrsd/framelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lrsd/error.hpp"

namespace lrsd {
namespace {

using Mask = FrameletTransform::Mask;

// out[i] = h0 in[i-1] + h1 in[i] + h2 in[i+1] along one axis, reflecting
// in[-1] -> in[0] and in[len] -> in[len-1]. `stride` steps along the axis,
// `count`/`step` enumerate the independent lines.
void filter_lines(const Mask& h, const double* in, double* out,
                  std::size_t len, std::size_t stride, std::size_t count,
                  std::size_t step) {
  for (std::size_t line = 0; line < count; ++line) {
    const double* src = in + line * step;
    double* dst = out + line * step;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t lo = i > 0 ? i - 1 : 0;
      const std::size_t hi = i + 1 < len ? i + 1 : len - 1;
      dst[i * stride] = h[0] * src[lo * stride] + h[1] * src[i * stride] +
                        h[2] * src[hi * stride];
    }
  }
}

// Accumulates the transpose of filter_lines into out.
void filter_lines_adjoint(const Mask& h, const double* in, double* out,
                          std::size_t len, std::size_t stride,
                          std::size_t count, std::size_t step) {
  for (std::size_t line = 0; line < count; ++line) {
    const double* src = in + line * step;
    double* dst = out + line * step;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t lo = i > 0 ? i - 1 : 0;
      const std::size_t hi = i + 1 < len ? i + 1 : len - 1;
      const double v = src[i * stride];
      dst[lo * stride] += h[0] * v;
      dst[i * stride] += h[1] * v;
      dst[hi * stride] += h[2] * v;
    }
  }
}

}  // namespace

FrameletTransform::FrameletTransform(FrameGeometry geometry)
    : geometry_(geometry.single_channel()) {
  geometry_.validate();
}

const std::array<Mask, 3>& FrameletTransform::masks() {
  static const std::array<Mask, 3> m = {
      Mask{0.25, 0.5, 0.25},
      Mask{std::numbers::sqrt2 / 4.0, 0.0, -std::numbers::sqrt2 / 4.0},
      Mask{-0.25, 0.5, -0.25},
  };
  return m;
}

void FrameletTransform::analyze_into(std::span<const double> frame,
                                     std::span<double> coeffs) const {
  const std::size_t w = geometry_.width, h = geometry_.height;
  const std::size_t n = geometry_.pixels();
  require(frame.size() == n, ErrorCode::shape_mismatch,
          "framelet analyze: frame length does not match geometry");
  require(coeffs.size() == kSubbands * n, ErrorCode::shape_mismatch,
          "framelet analyze: coefficient buffer has the wrong length");
  std::vector<double> horizontal(n);
  for (std::size_t a = 0; a < 3; ++a) {
    filter_lines(masks()[a], frame.data(), horizontal.data(), w, 1, h, w);
    for (std::size_t b = 0; b < 3; ++b) {
      filter_lines(masks()[b], horizontal.data(),
                   coeffs.data() + (3 * a + b) * n, h, w, w, 1);
    }
  }
}

void FrameletTransform::synthesize_into(std::span<const double> coeffs,
                                        std::span<double> frame) const {
  const std::size_t w = geometry_.width, h = geometry_.height;
  const std::size_t n = geometry_.pixels();
  require(coeffs.size() == kSubbands * n, ErrorCode::shape_mismatch,
          "framelet synthesize: coefficient length does not match geometry");
  require(frame.size() == n, ErrorCode::shape_mismatch,
          "framelet synthesize: frame buffer has the wrong length");
  std::fill(frame.begin(), frame.end(), 0.0);
  std::vector<double> vertical(n);
  for (std::size_t a = 0; a < 3; ++a) {
    std::fill(vertical.begin(), vertical.end(), 0.0);
    for (std::size_t b = 0; b < 3; ++b) {
      filter_lines_adjoint(masks()[b], coeffs.data() + (3 * a + b) * n,
                           vertical.data(), h, w, w, 1);
    }
    filter_lines_adjoint(masks()[a], vertical.data(), frame.data(), w, 1, h,
                         w);
  }
}

FrameletCoeffs FrameletTransform::analyze(std::span<const double> frame) const {
  FrameletCoeffs c{geometry_, std::vector<double>(coefficient_count())};
  analyze_into(frame, c.data);
  return c;
}

std::vector<double> FrameletTransform::synthesize(
    const FrameletCoeffs& coeffs) const {
  require(coeffs.geometry == geometry_, ErrorCode::geometry_mismatch,
          "framelet synthesize: coefficient geometry differs");
  std::vector<double> frame(geometry_.pixels());
  synthesize_into(coeffs.data, frame);
  return frame;
}

std::size_t FrameletTransform::channels_of_volume(Eigen::Index rows) const {
  const auto n = static_cast<Eigen::Index>(geometry_.pixels());
  if (rows == n) return 1;
  if (rows == 3 * n) return 3;
  fail(ErrorCode::shape_mismatch,
       "framelet: volume rows must be n or 3n for the transform geometry");
}

std::size_t FrameletTransform::channels_of_coeffs(Eigen::Index rows) const {
  const auto m = static_cast<Eigen::Index>(coefficient_count());
  if (rows == m) return 1;
  if (rows == 3 * m) return 3;
  fail(ErrorCode::shape_mismatch,
       "framelet: coefficient rows must be 9n or 27n for the transform geometry");
}

Matrix FrameletTransform::analyze_volume(
    const Eigen::Ref<const Matrix>& x) const {
  const std::size_t channels = channels_of_volume(x.rows());
  const std::size_t n = geometry_.pixels();
  const std::size_t m = coefficient_count();
  Matrix out(static_cast<Eigen::Index>(channels * m), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector column = x.col(j);
    for (std::size_t c = 0; c < channels; ++c) {
      analyze_into(std::span<const double>(column.data() + c * n, n),
                   std::span<double>(out.col(j).data() + c * m, m));
    }
  }
  return out;
}

Matrix FrameletTransform::synthesize_volume(
    const Eigen::Ref<const Matrix>& coeffs) const {
  const std::size_t channels = channels_of_coeffs(coeffs.rows());
  const std::size_t n = geometry_.pixels();
  const std::size_t m = coefficient_count();
  Matrix out(static_cast<Eigen::Index>(channels * n), coeffs.cols());
  for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
    const Vector column = coeffs.col(j);
    for (std::size_t c = 0; c < channels; ++c) {
      synthesize_into(std::span<const double>(column.data() + c * m, m),
                      std::span<double>(out.col(j).data() + c * n, n));
    }
  }
  return out;
}

}  // namespace lrsd
