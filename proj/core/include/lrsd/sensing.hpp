#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lrsd/volume.hpp"

namespace lrsd {

/// In-place orthonormal Walsh-Hadamard transform in natural (Hadamard)
/// order. The length must be a power of two; the transform is its own
/// inverse.
void fwht_inplace(std::span<double> v);
std::vector<double> fwht(std::vector<double> v);

bool is_power_of_two(std::size_t n) noexcept;

/// Portable seeded generator: std::mt19937_64, whose output sequence is fixed
/// by the standard, plus an unbiased rejection-sampled bounded draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform real in [0, 1) from the top 53 bits of one draw.
  double uniform();
  /// Standard normal via Box-Muller on two uniform() draws.
  double normal();

  /// Fisher-Yates shuffle of 0..n-1, iterating i = n-1 down to 1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// A contiguous run of the permuted signal transformed by one Walsh-Hadamard
/// block.
struct HadamardBlock {
  std::size_t offset;
  std::size_t length;
};

/// Randomly permuted, row-subsampled orthonormal Walsh-Hadamard sensing
/// matrix phi (M x N):
///
///   phi x = S B P x
///
/// where P gathers x through `col_perm` (permuted[i] = x[col_perm[i]]), B is
/// block-diagonal with orthonormal Walsh-Hadamard blocks sized by the binary
/// expansion of N (largest first; a single block when N is a power of two),
/// and S keeps the rows in `row_set`. B P is orthogonal, so phi phi^T = I
/// exactly for every N.
///
/// col_perm is drawn from Rng(seed). row_set takes an independent
/// permutation drawn from Rng(seed ^ kRowStreamSalt), moves the first row of
/// every block (the all-ones Walsh row) to the front, and keeps the first M
/// entries. Without those rows a volume that is constant on a block is
/// invisible to phi.
class SensingOperator {
 public:
  static constexpr std::uint64_t kRowStreamSalt = 0x9E3779B97F4A7C15ULL;

  /// Requires 1 <= measurements < signal_len.
  static SensingOperator build(std::size_t signal_len,
                               std::size_t measurements, std::uint64_t seed);
  /// M = N: a full orthogonal basis, so project() is the identity.
  static SensingOperator complete(std::size_t signal_len, std::uint64_t seed);

  std::size_t signal_len() const noexcept { return col_perm_.size(); }
  std::size_t measurements() const noexcept { return row_set_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::size_t>& col_perm() const noexcept { return col_perm_; }
  const std::vector<std::size_t>& row_set() const noexcept { return row_set_; }
  const std::vector<HadamardBlock>& blocks() const noexcept { return blocks_; }

  /// y = phi * vec(x), vec stacking the columns of x.
  Vector measure(const Eigen::Ref<const Matrix>& x) const;
  Vector measure(const VideoVolume& x) const { return measure(x.data()); }

  /// phi^T y reshaped to rows x cols (column-major).
  Matrix adjoint(const Eigen::Ref<const Vector>& y, Eigen::Index rows,
                 Eigen::Index cols) const;

  /// Orthogonal projector phi^T phi onto the row space of phi.
  Matrix project(const Eigen::Ref<const Matrix>& x) const;

 private:
  SensingOperator(std::size_t signal_len, std::size_t measurements,
                  std::uint64_t seed);

  void transform_blocks(std::span<double> v) const;

  std::uint64_t seed_ = 0;
  std::vector<std::size_t> col_perm_;
  std::vector<std::size_t> row_set_;
  std::vector<HadamardBlock> blocks_;
};

/// Splits n into power-of-two blocks, largest first.
std::vector<HadamardBlock> hadamard_blocks(std::size_t n);

}  // namespace lrsd
