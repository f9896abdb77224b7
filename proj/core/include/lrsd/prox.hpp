#pragma once

#include <Eigen/Core>

#include "lrsd/volume.hpp"

namespace lrsd {

/// Thin SVD A = U * diag(sigma) * V^T with r = min(rows, cols) columns.
/// sigma is nonincreasing and nonnegative.
struct ThinSvd {
  Matrix U;
  Vector sigma;
  Matrix V;

  Matrix reconstruct() const;
};

/// Singular values at or below this fraction of the largest are treated as
/// zero by svt().
inline constexpr double kSingularDropTolerance = 1e-12;

/// Thin SVD via Householder QR of the tall orientation followed by a
/// two-sided Jacobi SVD of the small triangular factor; O(n J^2 + J^3).
ThinSvd thin_svd(const Eigen::Ref<const Matrix>& a);

/// Singular value thresholding U diag(max(sigma - tau, 0)) V^T, the proximal
/// map of tau * ||.||_*.
Matrix svt(const Eigen::Ref<const Matrix>& a, double tau);

/// Element-wise soft thresholding sgn(x) max(|x| - tau, 0).
Matrix scalar_shrink(const Eigen::Ref<const Matrix>& x, double tau);

/// Radial shrinkage of the 3-vectors formed by the three row blocks of x
/// (the colour planes). Zero vectors map to zero.
Matrix group_shrink(const Eigen::Ref<const Matrix>& x, double tau);

double nuclear_norm(const Eigen::Ref<const Matrix>& a);
double l1_norm(const Eigen::Ref<const Matrix>& x);
/// Sum over positions of the 2-norm across the three row blocks of x.
double l21_norm(const Eigen::Ref<const Matrix>& x);

/// Number of singular values strictly above relative_threshold * sigma_max.
int rank_of_spectrum(const Vector& sigma, double relative_threshold = 1e-3);
/// rank_of_spectrum of the singular values of a.
int numerical_rank(const Eigen::Ref<const Matrix>& a,
                   double relative_threshold = 1e-3);

}  // namespace lrsd
