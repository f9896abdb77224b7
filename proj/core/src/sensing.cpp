#include "lrsd/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "lrsd/error.hpp"

namespace lrsd {

bool is_power_of_two(std::size_t n) noexcept {
  return n > 0 && (n & (n - 1)) == 0;
}

void fwht_inplace(std::span<double> v) {
  const std::size_t len = v.size();
  require(is_power_of_two(len), ErrorCode::invalid_argument,
          "Walsh-Hadamard transform length must be a power of two");
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(len));
  for (double& x : v) x *= scale;
}

std::vector<double> fwht(std::vector<double> v) {
  fwht_inplace(v);
  return v;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  require(bound > 0, ErrorCode::invalid_argument, "Rng::below needs bound > 0");
  // Reject the low (2^64 mod bound) values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

std::vector<HadamardBlock> hadamard_blocks(std::size_t n) {
  std::vector<HadamardBlock> blocks;
  std::size_t offset = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const std::size_t len = std::size_t{1} << bit;
    if (n & len) {
      blocks.push_back({offset, len});
      offset += len;
    }
  }
  return blocks;
}

SensingOperator::SensingOperator(std::size_t signal_len,
                                 std::size_t measurements, std::uint64_t seed)
    : seed_(seed), blocks_(hadamard_blocks(signal_len)) {
  Rng col_stream(seed);
  col_perm_ = col_stream.permutation(signal_len);
  Rng row_stream(seed ^ kRowStreamSalt);
  row_set_ = row_stream.permutation(signal_len);
  // Block DC rows first, keeping the shuffled order of everything else.
  std::stable_partition(row_set_.begin(), row_set_.end(), [&](std::size_t r) {
    return std::any_of(blocks_.begin(), blocks_.end(),
                       [r](const HadamardBlock& b) { return b.offset == r; });
  });
  row_set_.resize(measurements);
}

SensingOperator SensingOperator::build(std::size_t signal_len,
                                       std::size_t measurements,
                                       std::uint64_t seed) {
  require(measurements >= 1, ErrorCode::invalid_argument,
          "at least one measurement is required");
  require(measurements < signal_len, ErrorCode::invalid_argument,
          "measurement count must be smaller than the signal length");
  return {signal_len, measurements, seed};
}

SensingOperator SensingOperator::complete(std::size_t signal_len,
                                          std::uint64_t seed) {
  require(signal_len >= 1, ErrorCode::invalid_argument,
          "signal length must be positive");
  return {signal_len, signal_len, seed};
}

void SensingOperator::transform_blocks(std::span<double> v) const {
  for (const HadamardBlock& b : blocks_) {
    fwht_inplace(v.subspan(b.offset, b.length));
  }
}

Vector SensingOperator::measure(const Eigen::Ref<const Matrix>& x) const {
  require(static_cast<std::size_t>(x.size()) == signal_len(),
          ErrorCode::shape_mismatch,
          "measure: volume size does not match the operator");
  const Eigen::Index rows = x.rows();
  std::vector<double> work(signal_len());
  for (std::size_t i = 0; i < work.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(col_perm_[i]);
    work[i] = x(k % rows, k / rows);
  }
  transform_blocks(work);
  Vector y(static_cast<Eigen::Index>(measurements()));
  for (std::size_t r = 0; r < row_set_.size(); ++r) {
    y(static_cast<Eigen::Index>(r)) = work[row_set_[r]];
  }
  return y;
}

Matrix SensingOperator::adjoint(const Eigen::Ref<const Vector>& y,
                                Eigen::Index rows, Eigen::Index cols) const {
  require(static_cast<std::size_t>(y.size()) == measurements(),
          ErrorCode::shape_mismatch,
          "adjoint: measurement vector length does not match the operator");
  require(rows >= 0 && cols >= 0 &&
              static_cast<std::size_t>(rows * cols) == signal_len(),
          ErrorCode::shape_mismatch,
          "adjoint: output shape does not match the operator");
  std::vector<double> work(signal_len(), 0.0);
  for (std::size_t r = 0; r < row_set_.size(); ++r) {
    work[row_set_[r]] = y(static_cast<Eigen::Index>(r));
  }
  transform_blocks(work);
  Matrix out(rows, cols);
  double* dst = out.data();
  for (std::size_t i = 0; i < work.size(); ++i) dst[col_perm_[i]] = work[i];
  return out;
}

Matrix SensingOperator::project(const Eigen::Ref<const Matrix>& x) const {
  return adjoint(measure(x), x.rows(), x.cols());
}

}  // namespace lrsd
