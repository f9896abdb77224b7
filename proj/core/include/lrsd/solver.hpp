#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "lrsd/framelet.hpp"
#include "lrsd/sensing.hpp"
#include "lrsd/volume.hpp"

namespace lrsd {

/// How the quadratic (X1, X2) block of each iteration is handled.
enum class XUpdate {
  exact,             ///< closed form via Schur complement + Woodbury
  steepest_descent,  ///< one exact-line-search gradient step
};

struct SolverConfig {
  /// (sqrt(5) + 1) / 2; gamma must stay strictly below it.
  static constexpr double kGammaBound = std::numbers::phi;

  double mu1 = 1.0;
  double mu2 = 0.0;
  double mu3 = 1e-3;
  /// Penalty multipliers. When scale_beta_by_measurements is set the
  /// effective penalty is beta[i] / mean(|y|).
  std::array<double, 4> beta = {0.005, 0.005, 0.005, 0.005};
  bool scale_beta_by_measurements = true;
  double gamma = 1.6;
  int max_iter = 300;
  double tol_rel_change = 1e-4;
  double tol_feas = 1e-3;
  XUpdate x_update = XUpdate::exact;
  /// Keep the Z2 / lambda2 splitting even when mu2 == 0. Turning it off
  /// requires mu2 == 0.
  bool split_x1_sparsity = true;
  /// Recompute the (X1, X2) gradient after every exact update and fail if
  /// it exceeds 1e-9 * scale.
  bool check_stationarity = false;

  void validate() const;
};

/// Effective penalties beta_1..beta_4 of one solve.
struct Penalties {
  double beta1 = 1.0, beta2 = 1.0, beta3 = 1.0, beta4 = 1.0;
};

Penalties effective_penalties(const SolverConfig& config, const Vector& y);

/// Fixed inputs of one reconstruction. Holds references; the referenced
/// objects must outlive it.
struct Problem {
  const SensingOperator& op;
  const FrameletTransform& w1;
  const FrameletTransform& w2;
  const Vector& y;
  FrameGeometry geometry;
  std::size_t frame_count;

  Eigen::Index rows() const {
    return static_cast<Eigen::Index>(geometry.samples());
  }
  Eigen::Index cols() const { return static_cast<Eigen::Index>(frame_count); }
  bool joint_color() const { return geometry.channels == 3; }
  /// Shape checks plus a probe of W^T W = I and phi phi^T = I.
  void verify() const;
};

struct SolverState {
  Matrix x1, x2;
  Matrix z1, z2, z3;
  Matrix lambda1, lambda2, lambda3;
  Vector lambda4;

  static SolverState zeros(const Problem& problem);
  bool all_finite() const;
};

struct XBlock {
  Matrix x1, x2;
};

struct ZBlock {
  Matrix z1, z2, z3;
};

struct Multipliers {
  Matrix lambda1, lambda2, lambda3;
  Vector lambda4;
};

/// Exact minimiser of the augmented Lagrangian over (X1, X2). With
/// a = beta1 + beta2, b = beta3, P = phi^T phi:
///
///   R1 = l1 + b1 Z1 + W1^T (l2 + b2 Z2) + phi^T (l4 + b4 y)
///   R2 =           W2^T (l3 + b3 Z3) + phi^T (l4 + b4 y)
///   S  = P(R1/a + R2/b) / (1 + b4 (1/a + 1/b))
///   X1 = (R1 - b4 S) / a,   X2 = (R2 - b4 S) / b
XBlock solve_x_subproblem(const SolverState& state, const SolverConfig& config,
                          const Penalties& penalties, const Problem& problem);

/// One steepest-descent step with exact line search from (state.x1, state.x2).
/// Uses W^T W and phi^T phi as operators, so it does not rely on either being
/// the identity or a projector.
XBlock steepest_descent_x_step(const SolverState& state,
                               const SolverConfig& config,
                               const Penalties& penalties,
                               const Problem& problem);

/// Frobenius norm of grad_{X1, X2} L_A at (x1, x2) with the state's Z and
/// multipliers.
double x_gradient_norm(const Matrix& x1, const Matrix& x2,
                       const SolverState& state, const SolverConfig& config,
                       const Penalties& penalties, const Problem& problem);

/// Z1 = svt(X1 - l1/b1, mu1/b1); Z2, Z3 by scalar shrinkage (grayscale) or
/// pixel-wise group shrinkage (colour).
ZBlock update_z(const SolverState& state, const SolverConfig& config,
                const Penalties& penalties, const Problem& problem);

/// lambda_i <- lambda_i - gamma * beta_i * (constraint residual i).
Multipliers update_multipliers(const SolverState& state,
                               const SolverConfig& config,
                               const Penalties& penalties,
                               const Problem& problem);

/// mu1 ||X1||_* + mu2 ||W1 X1|| + mu3 ||W2 X2||, the sparsity norms being
/// l1 for grayscale and l2,1 across colour planes for joint colour.
double objective(const Matrix& x1, const Matrix& x2,
                 const FrameletTransform& w1, const FrameletTransform& w2,
                 const SolverConfig& config);

/// ||phi(X1 + X2) - y|| / ||y||, or the absolute residual when y = 0.
double feasibility(const Matrix& x1, const Matrix& x2, const Problem& problem);

struct Decomposition {
  VideoVolume background;  // X1
  VideoVolume foreground;  // X2
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;
  std::vector<double> feas_history;
  std::vector<double> change_history;
  Vector x1_singular_values;
  int numerical_rank_x1 = 0;

  Matrix combined() const { return background.data() + foreground.data(); }
};

/// Called after every completed iteration with its 1-based index.
using IterationObserver =
    std::function<void(int iteration, const SolverState& state)>;

/// Grayscale model. geometry.channels must be 1.
Decomposition reconstruct(const Vector& y, const SensingOperator& op,
                          const FrameletTransform& w1,
                          const FrameletTransform& w2,
                          const FrameGeometry& geometry,
                          std::size_t frame_count, const SolverConfig& config,
                          const IterationObserver& observer = {});

/// Joint colour model over the stacked 3n x J volume. geometry.channels must
/// be 3.
Decomposition reconstruct_color(const Vector& y, const SensingOperator& op,
                                const FrameletTransform& w1,
                                const FrameletTransform& w2,
                                const FrameGeometry& geometry,
                                std::size_t frame_count,
                                const SolverConfig& config,
                                const IterationObserver& observer = {});

}  // namespace lrsd
