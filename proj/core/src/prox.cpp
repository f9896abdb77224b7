#include "lrsd/prox.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "lrsd/error.hpp"

namespace lrsd {
namespace {

void require_finite(const Eigen::Ref<const Matrix>& a, const char* what) {
  if (!a.allFinite()) fail(ErrorCode::invalid_argument, what);
}

void require_threshold(double tau) {
  require(tau >= 0.0 && std::isfinite(tau), ErrorCode::invalid_argument,
          "shrinkage threshold must be finite and nonnegative");
}

// Tall case: rows >= cols.
ThinSvd tall_svd(const Eigen::Ref<const Matrix>& a) {
  const Eigen::Index cols = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> small(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {q * small.matrixU(), small.singularValues(), small.matrixV()};
}

}  // namespace

Matrix ThinSvd::reconstruct() const {
  return U * sigma.asDiagonal() * V.transpose();
}

ThinSvd thin_svd(const Eigen::Ref<const Matrix>& a) {
  require(a.rows() >= 1 && a.cols() >= 1, ErrorCode::invalid_argument,
          "thin_svd needs a non-empty matrix");
  require_finite(a, "thin_svd input has non-finite entries");
  if (a.rows() >= a.cols()) return tall_svd(a);
  ThinSvd t = tall_svd(a.transpose());
  return {std::move(t.V), std::move(t.sigma), std::move(t.U)};
}

Matrix svt(const Eigen::Ref<const Matrix>& a, double tau) {
  require_threshold(tau);
  if (tau == 0.0) return a;
  const ThinSvd s = thin_svd(a);
  const double cutoff =
      s.sigma.size() > 0 ? kSingularDropTolerance * s.sigma(0) : 0.0;
  Eigen::Index kept = 0;
  while (kept < s.sigma.size() && s.sigma(kept) > tau &&
         s.sigma(kept) > cutoff) {
    ++kept;
  }
  if (kept == 0) return Matrix::Zero(a.rows(), a.cols());
  const Vector shrunk = s.sigma.head(kept).array() - tau;
  return s.U.leftCols(kept) * shrunk.asDiagonal() *
         s.V.leftCols(kept).transpose();
}

Matrix scalar_shrink(const Eigen::Ref<const Matrix>& x, double tau) {
  require_threshold(tau);
  if (tau == 0.0) return x;
  return x.unaryExpr([tau](double v) {
    const double m = std::abs(v) - tau;
    return m > 0.0 ? std::copysign(m, v) : 0.0;
  });
}

Matrix group_shrink(const Eigen::Ref<const Matrix>& x, double tau) {
  require_threshold(tau);
  require(x.rows() % 3 == 0, ErrorCode::shape_mismatch,
          "group_shrink needs a row count divisible by 3");
  const Eigen::Index block = x.rows() / 3;
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < block; ++i) {
      const double r = x(i, j), g = x(i + block, j), b = x(i + 2 * block, j);
      const double norm = std::sqrt(r * r + g * g + b * b);
      const double factor = norm > tau ? (norm - tau) / norm : 0.0;
      out(i, j) = factor * r;
      out(i + block, j) = factor * g;
      out(i + 2 * block, j) = factor * b;
    }
  }
  return out;
}

double nuclear_norm(const Eigen::Ref<const Matrix>& a) {
  require_finite(a, "nuclear_norm input has non-finite entries");
  return thin_svd(a).sigma.sum();
}

double l1_norm(const Eigen::Ref<const Matrix>& x) {
  return x.cwiseAbs().sum();
}

double l21_norm(const Eigen::Ref<const Matrix>& x) {
  require(x.rows() % 3 == 0, ErrorCode::shape_mismatch,
          "l21_norm needs a row count divisible by 3");
  const Eigen::Index block = x.rows() / 3;
  return (x.topRows(block).array().square() +
          x.middleRows(block, block).array().square() +
          x.bottomRows(block).array().square())
      .sqrt()
      .sum();
}

int rank_of_spectrum(const Vector& sigma, double relative_threshold) {
  if (sigma.size() == 0) return 0;
  const double top = sigma.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((sigma.array() > relative_threshold * top).count());
}

int numerical_rank(const Eigen::Ref<const Matrix>& a,
                   double relative_threshold) {
  return rank_of_spectrum(thin_svd(a).sigma, relative_threshold);
}

}  // namespace lrsd
