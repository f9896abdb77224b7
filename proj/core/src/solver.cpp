#include "lrsd/solver.hpp"

#include <cmath>
#include <string>

#include "lrsd/error.hpp"
#include "lrsd/prox.hpp"

namespace lrsd {
namespace {

double squared_norm(const Matrix& m) { return m.squaredNorm(); }

// phi^T (lambda4 + beta4 y) reshaped to the volume.
Matrix measurement_pull(const SolverState& state, const Penalties& p,
                        const Problem& problem) {
  const Vector v = state.lambda4 + p.beta4 * problem.y;
  return problem.op.adjoint(v, problem.rows(), problem.cols());
}

Matrix shrink(const Matrix& x, double tau, bool joint_color) {
  return joint_color ? group_shrink(x, tau) : scalar_shrink(x, tau);
}

double sparsity_norm(const Matrix& c, bool joint_color) {
  return joint_color ? l21_norm(c) : l1_norm(c);
}

struct XGradient {
  Matrix g1, g2;
};

XGradient x_gradient(const Matrix& x1, const Matrix& x2,
                     const SolverState& s, const SolverConfig& config,
                     const Penalties& p, const Problem& problem) {
  const Vector r4 = problem.op.measure(x1 + x2) - problem.y;
  const Matrix common = problem.op.adjoint(p.beta4 * r4 - s.lambda4,
                                           problem.rows(), problem.cols());
  XGradient g;
  g.g1 = p.beta1 * (x1 - s.z1) - s.lambda1 + common;
  if (config.split_x1_sparsity) {
    g.g1 += problem.w1.synthesize_volume(
        p.beta2 * (problem.w1.analyze_volume(x1) - s.z2) - s.lambda2);
  }
  g.g2 = problem.w2.synthesize_volume(
             p.beta3 * (problem.w2.analyze_volume(x2) - s.z3) - s.lambda3) +
         common;
  return g;
}

}  // namespace

void SolverConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::configuration, what);
  };
  check(mu1 >= 0 && mu2 >= 0 && mu3 >= 0 && std::isfinite(mu1) &&
            std::isfinite(mu2) && std::isfinite(mu3),
        "mu weights must be finite and nonnegative");
  for (double b : beta) {
    check(b > 0 && std::isfinite(b), "every beta must be finite and positive");
  }
  check(gamma > 0 && gamma < kGammaBound,
        "gamma must lie strictly inside (0, (sqrt(5)+1)/2)");
  check(max_iter >= 1, "max_iter must be positive");
  check(tol_rel_change >= 0 && tol_feas >= 0, "tolerances must be nonnegative");
  check(split_x1_sparsity || mu2 == 0.0,
        "dropping the X1 sparsity splitting requires mu2 = 0");
}

Penalties effective_penalties(const SolverConfig& config, const Vector& y) {
  double scale = 1.0;
  if (config.scale_beta_by_measurements && y.size() > 0) {
    const double mean_abs = y.cwiseAbs().mean();
    if (mean_abs > 0 && std::isfinite(mean_abs)) scale = 1.0 / mean_abs;
  }
  return {config.beta[0] * scale, config.beta[1] * scale,
          config.beta[2] * scale, config.beta[3] * scale};
}

void Problem::verify() const {
  geometry.validate();
  require(frame_count >= 1, ErrorCode::configuration,
          "reconstruction needs at least one frame");
  require(op.signal_len() == geometry.samples() * frame_count,
          ErrorCode::configuration,
          "sensing operator length does not match the volume shape");
  require(static_cast<std::size_t>(y.size()) == op.measurements(),
          ErrorCode::configuration,
          "measurement vector length does not match the operator");
  for (const FrameletTransform* w : {&w1, &w2}) {
    require(w->geometry() == geometry.single_channel(),
            ErrorCode::configuration,
            "framelet geometry does not match the frames");
  }

  // Deterministic probe: W^T W x = x and phi phi^T v = v.
  Rng rng(0x5EED);
  Matrix x(rows(), 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  for (const FrameletTransform* w : {&w1, &w2}) {
    const double err = (w->synthesize_volume(w->analyze_volume(x)) - x).norm();
    require(err <= 1e-10 * x.norm(), ErrorCode::configuration,
            "sparsifying transform is not a tight frame");
  }
  Vector v(y.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  const double err =
      (op.measure(op.adjoint(v, rows(), cols())) - v).norm();
  require(err <= 1e-10 * v.norm(), ErrorCode::configuration,
          "sensing operator rows are not orthonormal");
}

SolverState SolverState::zeros(const Problem& problem) {
  const Eigen::Index rows = problem.rows(), cols = problem.cols();
  const Eigen::Index coeff_rows =
      static_cast<Eigen::Index>(problem.geometry.channels *
                                problem.w1.coefficient_count());
  SolverState s;
  s.x1 = Matrix::Zero(rows, cols);
  s.x2 = Matrix::Zero(rows, cols);
  s.z1 = Matrix::Zero(rows, cols);
  s.z2 = Matrix::Zero(coeff_rows, cols);
  s.z3 = Matrix::Zero(coeff_rows, cols);
  s.lambda1 = Matrix::Zero(rows, cols);
  s.lambda2 = Matrix::Zero(coeff_rows, cols);
  s.lambda3 = Matrix::Zero(coeff_rows, cols);
  s.lambda4 = Vector::Zero(problem.y.size());
  return s;
}

bool SolverState::all_finite() const {
  return x1.allFinite() && x2.allFinite() && z1.allFinite() &&
         z2.allFinite() && z3.allFinite() && lambda1.allFinite() &&
         lambda2.allFinite() && lambda3.allFinite() && lambda4.allFinite();
}

XBlock solve_x_subproblem(const SolverState& s, const SolverConfig& config,
                          const Penalties& p, const Problem& problem) {
  const Matrix pull = measurement_pull(s, p, problem);
  Matrix r1 = s.lambda1 + p.beta1 * s.z1 + pull;
  double a = p.beta1;
  if (config.split_x1_sparsity) {
    r1 += problem.w1.synthesize_volume(s.lambda2 + p.beta2 * s.z2);
    a += p.beta2;
  }
  const Matrix r2 =
      problem.w2.synthesize_volume(s.lambda3 + p.beta3 * s.z3) + pull;
  const double b = p.beta3;

  const Matrix s_proj = problem.op.project(r1 / a + r2 / b) /
                        (1.0 + p.beta4 * (1.0 / a + 1.0 / b));
  XBlock x{(r1 - p.beta4 * s_proj) / a, (r2 - p.beta4 * s_proj) / b};

  if (config.check_stationarity) {
    const double residual = x_gradient_norm(x.x1, x.x2, s, config, p, problem);
    const double scale = 1.0 + r1.norm() + r2.norm();
    if (residual > 1e-9 * scale) {
      fail(ErrorCode::configuration,
           "X-subproblem stationarity residual " + std::to_string(residual) +
               " exceeds tolerance; preconditions violated");
    }
  }
  return x;
}

XBlock steepest_descent_x_step(const SolverState& s, const SolverConfig& config,
                               const Penalties& p, const Problem& problem) {
  const XGradient g = x_gradient(s.x1, s.x2, s, config, p, problem);
  const double gg = squared_norm(g.g1) + squared_norm(g.g2);
  if (gg == 0.0) return {s.x1, s.x2};

  const Matrix pg = problem.op.project(g.g1 + g.g2);
  Matrix h1 = p.beta1 * g.g1 + p.beta4 * pg;
  if (config.split_x1_sparsity) {
    h1 += p.beta2 *
          problem.w1.synthesize_volume(problem.w1.analyze_volume(g.g1));
  }
  const Matrix h2 =
      p.beta3 * problem.w2.synthesize_volume(problem.w2.analyze_volume(g.g2)) +
      p.beta4 * pg;
  const double curvature = (g.g1.array() * h1.array()).sum() +
                           (g.g2.array() * h2.array()).sum();
  const double step = curvature > 0.0 ? gg / curvature : 0.0;
  return {s.x1 - step * g.g1, s.x2 - step * g.g2};
}

double x_gradient_norm(const Matrix& x1, const Matrix& x2,
                       const SolverState& state, const SolverConfig& config,
                       const Penalties& penalties, const Problem& problem) {
  const XGradient g = x_gradient(x1, x2, state, config, penalties, problem);
  return std::sqrt(squared_norm(g.g1) + squared_norm(g.g2));
}

ZBlock update_z(const SolverState& s, const SolverConfig& config,
                const Penalties& p, const Problem& problem) {
  const bool color = problem.joint_color();
  ZBlock z;
  z.z1 = svt(s.x1 - s.lambda1 / p.beta1, config.mu1 / p.beta1);
  if (config.split_x1_sparsity) {
    z.z2 = shrink(problem.w1.analyze_volume(s.x1) - s.lambda2 / p.beta2,
                  config.mu2 / p.beta2, color);
  } else {
    z.z2 = s.z2;
  }
  z.z3 = shrink(problem.w2.analyze_volume(s.x2) - s.lambda3 / p.beta3,
                config.mu3 / p.beta3, color);
  return z;
}

Multipliers update_multipliers(const SolverState& s, const SolverConfig& config,
                               const Penalties& p, const Problem& problem) {
  const double g = config.gamma;
  Multipliers m;
  m.lambda1 = s.lambda1 - g * p.beta1 * (s.x1 - s.z1);
  if (config.split_x1_sparsity) {
    m.lambda2 =
        s.lambda2 - g * p.beta2 * (problem.w1.analyze_volume(s.x1) - s.z2);
  } else {
    m.lambda2 = s.lambda2;
  }
  m.lambda3 =
      s.lambda3 - g * p.beta3 * (problem.w2.analyze_volume(s.x2) - s.z3);
  m.lambda4 = s.lambda4 -
              g * p.beta4 * (problem.op.measure(s.x1 + s.x2) - problem.y);
  return m;
}

double objective(const Matrix& x1, const Matrix& x2,
                 const FrameletTransform& w1, const FrameletTransform& w2,
                 const SolverConfig& config) {
  const bool color =
      x1.rows() == static_cast<Eigen::Index>(3 * w1.geometry().pixels());
  double value = 0.0;
  if (config.mu1 != 0.0) value += config.mu1 * nuclear_norm(x1);
  if (config.mu2 != 0.0) {
    value += config.mu2 * sparsity_norm(w1.analyze_volume(x1), color);
  }
  if (config.mu3 != 0.0) {
    value += config.mu3 * sparsity_norm(w2.analyze_volume(x2), color);
  }
  return value;
}

double feasibility(const Matrix& x1, const Matrix& x2, const Problem& problem) {
  const double residual = (problem.op.measure(x1 + x2) - problem.y).norm();
  const double ynorm = problem.y.norm();
  return ynorm > 0.0 ? residual / ynorm : residual;
}

namespace {

Decomposition run_admm(const Problem& problem, const SolverConfig& config,
                       const IterationObserver& observer) {
  config.validate();
  problem.verify();
  const Penalties p = effective_penalties(config, problem.y);
  SolverState s = SolverState::zeros(problem);

  Decomposition result;
  for (int k = 1; k <= config.max_iter; ++k) {
    XBlock x = config.x_update == XUpdate::exact
                   ? solve_x_subproblem(s, config, p, problem)
                   : steepest_descent_x_step(s, config, p, problem);
    if (!x.x1.allFinite() || !x.x2.allFinite()) {
      fail(ErrorCode::numerical_failure,
           "non-finite X update at iteration " + std::to_string(k));
    }
    const double delta = std::sqrt(squared_norm(x.x1 - s.x1) +
                                   squared_norm(x.x2 - s.x2));
    const double size = std::sqrt(squared_norm(x.x1) + squared_norm(x.x2));
    const double change = size > 0.0 ? delta / size : delta;
    s.x1 = std::move(x.x1);
    s.x2 = std::move(x.x2);

    ZBlock z = update_z(s, config, p, problem);
    s.z1 = std::move(z.z1);
    s.z2 = std::move(z.z2);
    s.z3 = std::move(z.z3);

    Multipliers m = update_multipliers(s, config, p, problem);
    s.lambda1 = std::move(m.lambda1);
    s.lambda2 = std::move(m.lambda2);
    s.lambda3 = std::move(m.lambda3);
    s.lambda4 = std::move(m.lambda4);

    if (!s.all_finite()) {
      fail(ErrorCode::numerical_failure,
           "non-finite iterate at iteration " + std::to_string(k));
    }

    const double feas = feasibility(s.x1, s.x2, problem);
    result.feas_history.push_back(feas);
    result.change_history.push_back(change);
    result.objective_history.push_back(
        objective(s.x1, s.x2, problem.w1, problem.w2, config));
    result.iterations = k;
    if (observer) observer(k, s);

    if (change <= config.tol_rel_change && feas <= config.tol_feas) {
      result.converged = true;
      break;
    }
  }

  result.x1_singular_values = thin_svd(s.x1).sigma;
  result.numerical_rank_x1 = rank_of_spectrum(result.x1_singular_values);
  result.background = VideoVolume(problem.geometry, std::move(s.x1));
  result.foreground = VideoVolume(problem.geometry, std::move(s.x2));
  return result;
}

}  // namespace

Decomposition reconstruct(const Vector& y, const SensingOperator& op,
                          const FrameletTransform& w1,
                          const FrameletTransform& w2,
                          const FrameGeometry& geometry,
                          std::size_t frame_count, const SolverConfig& config,
                          const IterationObserver& observer) {
  require(geometry.channels == 1, ErrorCode::configuration,
          "reconstruct expects a single-channel geometry");
  return run_admm({op, w1, w2, y, geometry, frame_count}, config, observer);
}

Decomposition reconstruct_color(const Vector& y, const SensingOperator& op,
                                const FrameletTransform& w1,
                                const FrameletTransform& w2,
                                const FrameGeometry& geometry,
                                std::size_t frame_count,
                                const SolverConfig& config,
                                const IterationObserver& observer) {
  require(geometry.channels == 3, ErrorCode::configuration,
          "reconstruct_color expects a three-channel geometry");
  return run_admm({op, w1, w2, y, geometry, frame_count}, config, observer);
}

}  // namespace lrsd
