#include <gtest/gtest.h>

#include <cmath>

#include "lrsd/error.hpp"
#include "lrsd/framelet.hpp"
#include "lrsd/prox.hpp"
#include "lrsd/sensing.hpp"
#include "lrsd/solver.hpp"
#include "oracles.hpp"

namespace lrsd {
namespace {

SolverConfig unit_penalties() {
  SolverConfig c;
  c.beta = {1.0, 1.0, 1.0, 1.0};
  c.scale_beta_by_measurements = false;
  return c;
}

// Small random instance with dense copies of W and phi for the oracles.
struct Instance {
  FrameGeometry geometry{3, 2, 1};
  std::size_t frames = 3;
  SensingOperator op;
  FrameletTransform w;
  Vector y;
  Matrix phi;     // M x N
  Matrix wdense;  // 9n x n, per frame

  Instance(std::uint64_t seed, FrameGeometry g = {3, 2, 1}, std::size_t j = 3)
      : geometry(g),
        frames(j),
        op(SensingOperator::build(g.samples() * j, g.samples() * j / 2, seed)),
        w(g) {
    Rng rng(seed + 7);
    y.resize(static_cast<Eigen::Index>(op.measurements()));
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
    phi = oracle::dense_sensing_matrix(op);
    const auto n = static_cast<Eigen::Index>(g.pixels());
    wdense = oracle::dense_of(
        [&](const Vector& v) {
          std::vector<double> f(v.data(), v.data() + v.size());
          const auto c = w.analyze(f).data;
          return Vector(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
        },
        n);
  }

  Problem problem() const { return {op, w, w, y, geometry, frames}; }

  // Column-wise W for a volume (grayscale).
  Matrix W(const Matrix& x) const { return wdense * x; }
  Matrix Wt(const Matrix& c) const { return wdense.transpose() * c; }
  Matrix phiT(const Vector& v) const {
    return (phi.transpose() * v).reshaped(static_cast<Eigen::Index>(geometry.samples()),
                                          static_cast<Eigen::Index>(frames));
  }
  Vector Phi(const Matrix& x) const { return phi * x.reshaped(); }
};

SolverState random_state(const Problem& p, std::uint64_t seed) {
  SolverState s = SolverState::zeros(p);
  Rng rng(seed);
  auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  };
  fill(s.x1);
  fill(s.x2);
  fill(s.z1);
  fill(s.z2);
  fill(s.z3);
  fill(s.lambda1);
  fill(s.lambda2);
  fill(s.lambda3);
  fill(s.lambda4);
  return s;
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.619;
  EXPECT_THROW(c.validate(), Error);
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.gamma = 1.618;
  EXPECT_NO_THROW(c.validate());
  for (int i = 0; i < 4; ++i) {
    SolverConfig b;
    b.beta[static_cast<std::size_t>(i)] = 0.0;
    EXPECT_THROW(b.validate(), Error);
    b.beta[static_cast<std::size_t>(i)] = -1.0;
    EXPECT_THROW(b.validate(), Error);
  }
  SolverConfig m;
  m.mu3 = -1e-3;
  EXPECT_THROW(m.validate(), Error);
  SolverConfig s;
  s.mu2 = 0.1;
  s.split_x1_sparsity = false;
  EXPECT_THROW(s.validate(), Error);
}

TEST(SolverConfig, PenaltyScaling) {
  SolverConfig c;
  c.beta = {1, 2, 3, 4};
  Vector y(2);
  y << 2, -6;
  const Penalties p = effective_penalties(c, y);
  EXPECT_DOUBLE_EQ(p.beta1, 0.25);
  EXPECT_DOUBLE_EQ(p.beta4, 1.0);
  c.scale_beta_by_measurements = false;
  EXPECT_DOUBLE_EQ(effective_penalties(c, y).beta2, 2.0);
  c.scale_beta_by_measurements = true;
  EXPECT_DOUBLE_EQ(effective_penalties(c, Vector::Zero(2)).beta3, 3.0);
}

TEST(XSubproblem, ZeroStateGivesZero) {
  const Instance inst(1);
  Vector zero_y = Vector::Zero(inst.y.size());
  const Problem p{inst.op, inst.w, inst.w, zero_y, inst.geometry, inst.frames};
  const SolverConfig c = unit_penalties();
  const XBlock x = solve_x_subproblem(SolverState::zeros(p), c, effective_penalties(c, zero_y), p);
  EXPECT_EQ(x.x1.norm(), 0.0);
  EXPECT_EQ(x.x2.norm(), 0.0);
}

TEST(XSubproblem, ScalarInstance) {
  const SensingOperator op = SensingOperator::complete(1, 1);
  const FrameletTransform w({1, 1, 1});
  const Vector y = Vector::Ones(1);
  const Problem p{op, w, w, y, {1, 1, 1}, 1};
  const SolverConfig c = unit_penalties();
  const XBlock x = solve_x_subproblem(SolverState::zeros(p), c, effective_penalties(c, y), p);
  EXPECT_NEAR(x.x1(0, 0), 0.2, 1e-15);
  EXPECT_NEAR(x.x2(0, 0), 0.4, 1e-15);
  // 3 X1 + X2 = 1 and X1 + 2 X2 = 1
  EXPECT_NEAR(3 * x.x1(0, 0) + x.x2(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(x.x1(0, 0) + 2 * x.x2(0, 0), 1.0, 1e-15);
}

TEST(XSubproblem, StationarityAgainstDenseGradient) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst(seed);
    const Problem p = inst.problem();
    SolverConfig c;
    c.scale_beta_by_measurements = false;
    Rng rng(seed);
    for (double& b : c.beta) b = 0.1 + rng.uniform() * 3.0;
    const Penalties pen = effective_penalties(c, inst.y);
    const SolverState s = random_state(p, seed + 50);
    const XBlock x = solve_x_subproblem(s, c, pen, p);

    const Vector r4 = inst.Phi(x.x1 + x.x2) - inst.y;
    const Matrix common = inst.phiT(pen.beta4 * r4 - s.lambda4);
    const Matrix g1 = -s.lambda1 + pen.beta1 * (x.x1 - s.z1) - inst.Wt(s.lambda2) +
                      pen.beta2 * inst.Wt(inst.W(x.x1) - s.z2) + common;
    const Matrix g2 = -inst.Wt(s.lambda3) + pen.beta3 * inst.Wt(inst.W(x.x2) - s.z3) + common;
    const Matrix rhs = inst.phiT(s.lambda4 + pen.beta4 * inst.y);
    const Matrix r1 = s.lambda1 + pen.beta1 * s.z1 + inst.Wt(s.lambda2 + pen.beta2 * s.z2) + rhs;
    const Matrix r2 = inst.Wt(s.lambda3 + pen.beta3 * s.z3) + rhs;
    const double scale = 1.0 + r1.norm() + r2.norm();
    EXPECT_LE(std::sqrt(g1.squaredNorm() + g2.squaredNorm()), 1e-9 * scale) << seed;
    EXPECT_LE(x_gradient_norm(x.x1, x.x2, s, c, pen, p), 1e-9 * scale);
  }
}

TEST(XSubproblem, SteepestDescentStepDecreasesGradient) {
  const Instance inst(3);
  const Problem p = inst.problem();
  SolverConfig c = unit_penalties();
  const Penalties pen = effective_penalties(c, inst.y);
  SolverState s = random_state(p, 9);
  const double g0 = x_gradient_norm(s.x1, s.x2, s, c, pen, p);
  for (int i = 0; i < 200; ++i) {
    XBlock x = steepest_descent_x_step(s, c, pen, p);
    s.x1 = x.x1;
    s.x2 = x.x2;
  }
  EXPECT_LT(x_gradient_norm(s.x1, s.x2, s, c, pen, p), 1e-3 * g0);
  const XBlock exact = solve_x_subproblem(s, c, pen, p);
  EXPECT_LE((exact.x1 - s.x1).norm(), 1e-2 * (1.0 + exact.x1.norm()));
}

TEST(UpdateZ, Examples) {
  const Instance inst(4);
  const Problem p = inst.problem();
  SolverConfig c = unit_penalties();
  c.mu2 = 0.0;
  const Penalties pen = effective_penalties(c, inst.y);
  SolverState s = random_state(p, 2);
  const ZBlock z = update_z(s, c, pen, p);
  EXPECT_LE((z.z2 - (inst.W(s.x1) - s.lambda2 / pen.beta2)).cwiseAbs().maxCoeff(), 1e-14);
  s.x1.setZero();
  s.lambda1.setZero();
  EXPECT_EQ(update_z(s, c, pen, p).z1.norm(), 0.0);
}

TEST(UpdateZ, EachBlockDecreasesItsSubproblem) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst(seed);
    const Problem p = inst.problem();
    SolverConfig c = unit_penalties();
    c.mu1 = 0.7;
    c.mu2 = 0.3;
    c.mu3 = 0.2;
    const Penalties pen = effective_penalties(c, inst.y);
    const SolverState s = random_state(p, seed + 20);
    const ZBlock z = update_z(s, c, pen, p);
    auto f1 = [&](const Matrix& z1) {
      return c.mu1 * nuclear_norm(z1) +
             0.5 * pen.beta1 * (s.x1 - s.lambda1 / pen.beta1 - z1).squaredNorm();
    };
    auto f2 = [&](const Matrix& z2) {
      return c.mu2 * l1_norm(z2) +
             0.5 * pen.beta2 * (inst.W(s.x1) - s.lambda2 / pen.beta2 - z2).squaredNorm();
    };
    auto f3 = [&](const Matrix& z3) {
      return c.mu3 * l1_norm(z3) +
             0.5 * pen.beta3 * (inst.W(s.x2) - s.lambda3 / pen.beta3 - z3).squaredNorm();
    };
    EXPECT_LE(f1(z.z1), f1(s.z1));
    EXPECT_LE(f2(z.z2), f2(s.z2));
    EXPECT_LE(f3(z.z3), f3(s.z3));
  }
}

TEST(UpdateMultipliers, MatchesDirectFormula) {
  const Instance inst(5);
  const Problem p = inst.problem();
  SolverConfig c = unit_penalties();
  c.gamma = 1.3;
  c.beta = {0.5, 1.5, 2.5, 3.5};
  const Penalties pen = effective_penalties(c, inst.y);
  const SolverState s = random_state(p, 3);
  const Multipliers m = update_multipliers(s, c, pen, p);
  EXPECT_LE((m.lambda1 - (s.lambda1 - 1.3 * 0.5 * (s.x1 - s.z1))).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((m.lambda2 - (s.lambda2 - 1.3 * 1.5 * (inst.W(s.x1) - s.z2))).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((m.lambda3 - (s.lambda3 - 1.3 * 2.5 * (inst.W(s.x2) - s.z3))).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((m.lambda4 - (s.lambda4 - 1.3 * 3.5 * (inst.Phi(s.x1 + s.x2) - inst.y))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(UpdateMultipliers, ZeroResidualsLeaveMultipliersUnchanged) {
  const Instance inst(6);
  const Problem p = inst.problem();
  const SolverConfig c = unit_penalties();
  SolverState s = random_state(p, 4);
  s.z1 = s.x1;
  s.z2 = inst.W(s.x1);
  s.z3 = inst.W(s.x2);
  Vector y = inst.Phi(s.x1 + s.x2);
  const Problem q{inst.op, inst.w, inst.w, y, inst.geometry, inst.frames};
  const Multipliers m = update_multipliers(s, c, effective_penalties(c, y), q);
  EXPECT_LE((m.lambda1 - s.lambda1).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((m.lambda2 - s.lambda2).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((m.lambda3 - s.lambda3).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((m.lambda4 - s.lambda4).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Objective, Examples) {
  const FrameletTransform w({2, 1, 1});
  SolverConfig c;
  c.mu1 = 1.0;
  c.mu2 = 0.0;
  c.mu3 = 0.0;
  Matrix x1 = Matrix::Zero(2, 2);
  x1(0, 0) = 3;
  x1(1, 1) = 1;
  EXPECT_EQ(objective(Matrix::Zero(2, 2), Matrix::Zero(2, 2), w, w, SolverConfig{}), 0.0);
  EXPECT_NEAR(objective(x1, Matrix::Zero(2, 2), w, w, c), 4.0, 1e-14);
}

TEST(Objective, Recomposition) {
  const Instance inst(7);
  SolverConfig c;
  c.mu1 = 0.9;
  c.mu2 = 0.4;
  c.mu3 = 0.3;
  const Matrix x1 = Matrix::Random(6, 3), x2 = Matrix::Random(6, 3);
  const double expected = 0.9 * thin_svd(x1).sigma.sum() +
                          0.4 * inst.W(x1).cwiseAbs().sum() +
                          0.3 * inst.W(x2).cwiseAbs().sum();
  EXPECT_NEAR(objective(x1, x2, inst.w, inst.w, c), expected, 1e-12);

  const FrameletTransform wc({3, 2, 3});
  const Matrix c1 = Matrix::Random(18, 2), c2 = Matrix::Random(18, 2);
  const Matrix coeff = wc.analyze_volume(c2);
  double l21 = 0.0;
  for (Eigen::Index j = 0; j < 2; ++j) {
    for (Eigen::Index i = 0; i < 54; ++i) {
      l21 += std::sqrt(coeff(i, j) * coeff(i, j) + coeff(i + 54, j) * coeff(i + 54, j) +
                       coeff(i + 108, j) * coeff(i + 108, j));
    }
  }
  SolverConfig cc;
  cc.mu1 = 0.0;
  cc.mu2 = 0.0;
  cc.mu3 = 1.0;
  EXPECT_NEAR(objective(c1, c2, wc, wc, cc), l21, 1e-12);
}

TEST(Reconstruct, ZeroMeasurementsConvergeInOneIteration) {
  const FrameGeometry g{4, 4, 1};
  const auto op = SensingOperator::build(64, 20, 2);
  const FrameletTransform w(g);
  const Vector y = Vector::Zero(20);
  const Decomposition d = reconstruct(y, op, w, w, g, 4, SolverConfig{});
  EXPECT_EQ(d.iterations, 1);
  EXPECT_TRUE(d.converged);
  EXPECT_EQ(d.background.data().norm(), 0.0);
  EXPECT_EQ(d.foreground.data().norm(), 0.0);
  EXPECT_EQ(d.numerical_rank_x1, 0);

  const FrameGeometry gc{4, 4, 3};
  const auto opc = SensingOperator::build(192, 40, 2);
  const Decomposition dc =
      reconstruct_color(Vector::Zero(40), opc, FrameletTransform(gc), FrameletTransform(gc), gc, 4,
                        SolverConfig{});
  EXPECT_EQ(dc.background.data().norm() + dc.foreground.data().norm(), 0.0);
}

TEST(Reconstruct, FullMeasurementsRecoverRankOne) {
  const FrameGeometry g{8, 8, 1};
  const std::size_t frames = 4;
  const auto op = SensingOperator::complete(256, 11);
  const FrameletTransform w(g);
  Rng rng(12);
  Vector u(64), v(4);
  for (Eigen::Index i = 0; i < 64; ++i) u(i) = 50.0 + 20.0 * rng.uniform();
  v << 1.0, 0.9, 1.1, 0.8;
  const Matrix truth = u * v.transpose();
  const Vector y = op.measure(truth);
  SolverConfig c;
  c.mu3 = 2.0;  // l1 of framelet coefficients dominates ||.||_F, so X1 wins
  c.max_iter = 2000;
  c.tol_rel_change = 1e-7;
  c.tol_feas = 1e-7;
  const Decomposition d = reconstruct(y, op, w, w, g, frames, c);
  EXPECT_LE((d.background.data() - truth).norm() / truth.norm(), 1e-2);
  EXPECT_LE(d.foreground.data().norm() / truth.norm(), 1e-2);
}

TEST(Reconstruct, ReplicatedGrayscaleGivesEqualColourPlanes) {
  const FrameGeometry g{6, 6, 3};
  const std::size_t frames = 5;
  Rng rng(4);
  Matrix plane(36, 5);
  for (Eigen::Index i = 0; i < 36; ++i) {
    const double b = 80.0 + 40.0 * rng.uniform();
    for (Eigen::Index j = 0; j < 5; ++j) plane(i, j) = b;
  }
  plane(7, 1) += 90;
  plane(8, 2) += 90;
  plane(9, 3) += 90;
  Matrix x(108, 5);
  x << plane, plane, plane;
  const auto op = SensingOperator::complete(540, 5);
  const FrameletTransform w(g);
  SolverConfig c;
  c.mu3 = 0.2;
  c.max_iter = 400;
  const Decomposition d = reconstruct_color(op.measure(x), op, w, w, g, frames, c);
  const Matrix& b = d.background.data();
  EXPECT_LE((b.middleRows(0, 36) - b.middleRows(36, 36)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE((b.middleRows(0, 36) - b.middleRows(72, 36)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Reconstruct, WithoutX1SplitSameLimitAndLambda2StaysZero) {
  const FrameGeometry g{6, 6, 1};
  const std::size_t frames = 6;
  Rng rng(21);
  Vector u(36);
  for (Eigen::Index i = 0; i < 36; ++i) u(i) = 60 + 30 * rng.uniform();
  Matrix x = u * Vector::Ones(6).transpose();
  for (Eigen::Index j = 0; j < 6; ++j) x(j * 5, j) += 100;
  const auto op = SensingOperator::build(216, 108, 3);
  const FrameletTransform w(g);
  const Vector y = op.measure(x);

  SolverConfig split;
  split.mu3 = 0.1;
  split.beta = {0.5, 0.5, 0.5, 0.5};
  split.max_iter = 5000;
  split.tol_rel_change = 1e-8;
  split.tol_feas = 1e-8;
  bool lambda2_zero = true, z2_exact = true;
  const Decomposition a = reconstruct(y, op, w, w, g, frames, split, [&](int, const SolverState& s) {
    lambda2_zero = lambda2_zero && s.lambda2.norm() == 0.0;
    z2_exact = z2_exact && (s.z2 - w.analyze_volume(s.x1)).cwiseAbs().maxCoeff() == 0.0;
  });
  EXPECT_TRUE(lambda2_zero);
  EXPECT_TRUE(z2_exact);

  SolverConfig merged = split;
  merged.split_x1_sparsity = false;
  const Decomposition b = reconstruct(y, op, w, w, g, frames, merged);
  ASSERT_TRUE(a.converged);
  ASSERT_TRUE(b.converged);
  const double scale = x.norm();
  EXPECT_LE((a.background.data() - b.background.data()).norm() / scale, 1e-5);
  EXPECT_LE((a.foreground.data() - b.foreground.data()).norm() / scale, 1e-5);
}

TEST(Reconstruct, DeterministicAndObjectiveFinite) {
  const FrameGeometry g{8, 4, 1};
  const auto op = SensingOperator::build(128, 40, 8);
  const FrameletTransform w(g);
  Vector y = op.measure(Matrix::Constant(32, 4, 100.0));
  SolverConfig c;
  c.max_iter = 20;
  const Decomposition a = reconstruct(y, op, w, w, g, 4, c);
  const Decomposition b = reconstruct(y, op, w, w, g, 4, c);
  EXPECT_EQ(a.background.data(), b.background.data());
  EXPECT_EQ(a.foreground.data(), b.foreground.data());
  EXPECT_EQ(a.objective_history, b.objective_history);
  EXPECT_EQ(static_cast<int>(a.feas_history.size()), a.iterations);
  EXPECT_EQ(a.numerical_rank_x1, numerical_rank(a.background.data()));
}

TEST(Reconstruct, NonFiniteInputIsNumericalFailure) {
  const FrameGeometry g{4, 4, 1};
  const auto op = SensingOperator::build(32, 8, 1);
  const FrameletTransform w(g);
  Vector y = Vector::Ones(8);
  y(3) = std::nan("");
  try {
    reconstruct(y, op, w, w, g, 2, SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::numerical_failure);
    EXPECT_NE(std::string(e.what()).find("iteration 1"), std::string::npos);
  }
}

TEST(Reconstruct, ShapeAndChannelErrors) {
  const FrameGeometry g{4, 4, 1};
  const auto op = SensingOperator::build(32, 8, 1);
  const FrameletTransform w(g);
  EXPECT_THROW(reconstruct(Vector::Zero(7), op, w, w, g, 2, SolverConfig{}), Error);
  EXPECT_THROW(reconstruct(Vector::Zero(8), op, w, w, g, 3, SolverConfig{}), Error);
  EXPECT_THROW(reconstruct_color(Vector::Zero(8), op, w, w, g, 2, SolverConfig{}), Error);
  const FrameletTransform other({8, 2, 1});
  EXPECT_THROW(reconstruct(Vector::Zero(8), op, other, other, g, 2, SolverConfig{}), Error);
}

}  // namespace
}  // namespace lrsd
