#include "bypass/govi_engine.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bypass/distributions.hpp"
#include "bypass/errors.hpp"
#include "oracles.hpp"
#include "reference_kalman.hpp"
#include "stream_helpers.hpp"

using namespace bypass;

namespace {

WeightBelief belief_with(Vector mean, Matrix cov) { return WeightBelief{std::move(mean), std::move(cov)}; }

}  // namespace

TEST(UpdateAlpha, PriorMeanWithoutDrift) {
  const auto b = belief_with(Vector::Ones(2), Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(update_alpha(1000.0, 1.0, b, b, 1e-12), 1000.0);
}

TEST(UpdateAlpha, DirectSubstitution) {
  const auto prev = belief_with(Vector::Zero(2), Matrix::Identity(2, 2));
  const auto cur = belief_with(Vector::Ones(2), Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(update_alpha(1000.0, 1.0, cur, prev, 1e-12), 500.0);
}

TEST(UpdateAlpha, ClampsNegativeDenominator) {
  const auto prev = belief_with(Vector::Zero(1), Matrix::Constant(1, 1, 4.0));
  const auto cur = belief_with(Vector::Zero(1), Matrix::Constant(1, 1, 1.0));  // tr diff = -3 = -2b - 0 - 1
  EXPECT_DOUBLE_EQ(update_alpha(1000.0, 1.0, cur, prev, 1e-12), 2000.0 / 1e-12);
}

TEST(ComputeRho, Cases) {
  const Vector x = Vector::Ones(1);
  const auto zero_cov = belief_with(Vector::Constant(1, 2.0), Matrix::Zero(1, 1));
  EXPECT_EQ(compute_rho(2.0, x, zero_cov, 0.0, 0.0, 1e-12), 1e-12);
  EXPECT_DOUBLE_EQ(compute_rho(3.0, x, zero_cov, 0.0, 0.0, 1e-12), 1.0);
  const auto half_cov = belief_with(Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 0.5));
  EXPECT_DOUBLE_EQ(compute_rho(3.0, x, half_cov, 0.0, 0.25, 1e-12), 1.75);
}

TEST(UpdateBeta, MatchesOracleAndDecreases) {
  EXPECT_NEAR(update_beta(1.0) / oracle::gig_mean(1.0), 1.0, 1e-9);
  EXPECT_NEAR(update_beta(100.0) / oracle::gig_mean(100.0), 1.0, 1e-9);
  EXPECT_GT(update_beta(2.0), update_beta(2.5));
}

TEST(UpdateMu, Cases) {
  const Vector x = Vector::Ones(1);
  const auto b = belief_with(Vector::Constant(1, 1.0), Matrix::Zero(1, 1));
  EXPECT_NEAR(update_mu(1.0, x, b, 3.0, 1.25).mean, 0.0, 1e-15);
  const auto far = update_mu(11.0, x, b, 1.0, 1.0);
  const auto o = oracle::trunc_normal(10.0, 1.0, -1.0, 1.0);
  EXPECT_NEAR(far.mean, o.mean, 1e-9);
  EXPECT_NEAR(far.variance, o.variance, 1e-9);
  const auto degenerate = update_mu(11.0, x, b, 1.0, 0.0);
  EXPECT_EQ(degenerate.mean, 0.0);
  EXPECT_EQ(degenerate.variance, 0.0);
}

TEST(InitialState, PriorMeans) {
  const auto vs = initial_vstate(HyperParams{}, GoviConfig{});
  EXPECT_DOUBLE_EQ(vs.alpha_mean, 1000.0);
  EXPECT_DOUBLE_EQ(vs.beta_mean, 500.0);
  EXPECT_EQ(vs.mu_mean, 0.0);
  EXPECT_DOUBLE_EQ(vs.mu_var, ubar_variance(1.25));
}

TEST(BypassStep, ZeroResidualIsPassive) {
  const HyperParams hyper;
  const GoviConfig cfg;
  const auto belief = WeightBelief::zero(2);
  const auto vs = initial_vstate(hyper, cfg);
  Observation obs{(Vector(2) << 1.0, 0.5).finished(), 0.0};
  const auto r = bypass_step(belief, vs, hyper, obs, cfg);
  EXPECT_EQ(r.belief.mean, belief.mean);
  EXPECT_EQ(r.vstate.mu_mean, 0.0);
}

TEST(BypassStep, PredictionUsesPreviousState) {
  const HyperParams hyper;
  const GoviConfig cfg;
  const auto belief = belief_with(Vector::Constant(2, 0.3), Matrix::Identity(2, 2) * 0.1);
  VariationalState vs{20.0, 3.0, 0.4, 0.1};
  Observation obs{Vector::Ones(2), 5.0};
  const auto r = bypass_step(belief, vs, hyper, obs, cfg);
  const auto p = predict(belief, vs, obs.x).dist;
  EXPECT_EQ(r.pred.mean, p.mean);
  EXPECT_EQ(r.pred.variance, p.variance);
}

TEST(BypassStep, FrozenModeEqualsReferenceKalman) {
  const HyperParams hyper;
  GoviConfig cfg;
  cfg.max_fixed_point_iters = 0;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  VariationalState vs{200.0, 8.0, 0.05, 0.0};
  reference::Kalman ref(2, 1.0 / vs.alpha_mean, 1.0 / vs.beta_mean, vs.mu_mean);
  WeightBelief belief = WeightBelief::zero(2);
  for (int t = 0; t < 1000; ++t) {
    Observation obs{(Vector(2) << nd(rng), nd(rng)).finished(), nd(rng)};
    const auto r = bypass_step(belief, vs, hyper, obs, cfg);
    belief = r.belief;
    EXPECT_EQ(r.vstate.alpha_mean, vs.alpha_mean);
    ref.step(obs.x, *obs.y);
    ASSERT_LE((belief.mean - ref.mean).norm(), 1e-10 * ref.mean.norm()) << t;
    ASSERT_LE((belief.covariance - ref.cov).norm(), 1e-10 * ref.cov.norm()) << t;
  }
}

TEST(BypassStep, StreamConvergesAndKeepsInvariants) {
  const HyperParams hyper;
  const GoviConfig cfg;
  BypassFilter f(2, hyper, cfg);
  int converged = 0;
  const auto design = helpers::changepoint_design(2024, 1000);
  for (const auto& obs : design) {
    const auto r = f.step(obs);
    converged += r.diag.converged ? 1 : 0;
    EXPECT_GE(r.diag.iterations, 1);
    EXPECT_LE(r.diag.iterations, cfg.max_fixed_point_iters);
    EXPECT_LE(std::abs(r.vstate.mu_mean), hyper.epsilon);
    EXPECT_GE(r.vstate.mu_var, 0.0);
    EXPECT_LE(r.vstate.mu_var, 1.0 / r.vstate.beta_mean);
    EXPECT_GT(r.vstate.alpha_mean, 0.0);
    EXPECT_LE(r.vstate.alpha_mean, 2.0 * hyper.a / cfg.alpha_denominator_floor);
  }
  EXPECT_GE(converged, 990);
}

TEST(BypassStep, ConvergedStepIsAFixedPoint) {
  const HyperParams hyper;
  const GoviConfig cfg;
  const auto design = helpers::changepoint_design(7, 300);
  WeightBelief belief = WeightBelief::zero(2);
  VariationalState vs = initial_vstate(hyper, cfg);
  int checked = 0;
  for (const auto& obs : design) {
    const auto r = bypass_step(belief, vs, hyper, obs, cfg);
    if (r.diag.converged) {
      const double y = *obs.y;
      const Matrix P = predictive_covariance(belief, r.vstate.alpha_mean);
      const Vector g = kalman_gain(P, obs.x, r.vstate.beta_mean);
      const auto cand = measurement_update(belief, P, g, obs.x, y, r.vstate.mu_mean);
      const auto mu = update_mu(y, obs.x, cand, r.vstate.beta_mean, hyper.epsilon);
      const double rho = compute_rho(y, obs.x, cand, mu.mean, mu.variance, cfg.guards.rho_floor);
      const double beta = update_beta(rho);
      const double alpha = update_alpha(hyper.a, hyper.b, cand, belief, cfg.alpha_denominator_floor);
      auto rel = [](double a, double b) { return std::abs(a - b) / (std::abs(b) + 1e-12); };
      EXPECT_LE(rel(mu.mean, r.vstate.mu_mean), 10 * cfg.rel_tol);
      EXPECT_LE(rel(mu.variance, r.vstate.mu_var), 10 * cfg.rel_tol);
      EXPECT_LE(rel(beta, r.vstate.beta_mean), 10 * cfg.rel_tol);
      EXPECT_LE(rel(alpha, r.vstate.alpha_mean), 10 * cfg.rel_tol);
      ++checked;
    }
    belief = r.belief;
    vs = r.vstate;
  }
  EXPECT_GT(checked, 290);
}

TEST(BypassStep, Deterministic) {
  const auto design = helpers::changepoint_design(99, 500);
  BypassFilter f1(2, HyperParams{}, GoviConfig{});
  BypassFilter f2(2, HyperParams{}, GoviConfig{});
  for (const auto& obs : design) {
    const auto a = f1.step(obs);
    const auto b = f2.step(obs);
    ASSERT_EQ(a.pred.mean, b.pred.mean);
    ASSERT_EQ(a.pred.variance, b.pred.variance);
  }
  EXPECT_EQ(f1.belief().mean, f2.belief().mean);
  EXPECT_EQ(f1.belief().covariance, f2.belief().covariance);
}

TEST(HandleMissing, PropagatesDriftOnly) {
  const auto belief = belief_with((Vector(2) << 0.5, -1.0).finished(), Matrix::Identity(2, 2) * 0.2);
  const VariationalState vs{40.0, 5.0, 0.1, 0.2};
  const Vector x = Vector::Ones(2);
  const auto once = handle_missing(belief, vs, x);
  EXPECT_EQ(once.belief.mean, belief.mean);
  EXPECT_NEAR(once.belief.covariance.trace(), belief.covariance.trace() + 2.0 / 40.0, 1e-15);
  EXPECT_EQ(once.vstate.alpha_mean, vs.alpha_mean);
  EXPECT_EQ(once.vstate.mu_mean, vs.mu_mean);
  const auto twice = handle_missing(once.belief, once.vstate, x);
  const Matrix growth = twice.belief.covariance - belief.covariance;
  EXPECT_NEAR(growth(0, 0), 2.0 / 40.0, 1e-15);
  EXPECT_NEAR(growth(1, 1), 2.0 / 40.0, 1e-15);
  EXPECT_NEAR(growth(0, 1), 0.0, 1e-15);
}

TEST(BypassFilter, MissingOutputSkipsUpdate) {
  BypassFilter f(2, HyperParams{}, GoviConfig{});
  f.step({Vector::Ones(2), 1.0});
  const Vector before = f.belief().mean;
  f.step({Vector::Ones(2), std::nullopt});
  EXPECT_EQ(f.belief().mean, before);
  EXPECT_EQ(f.steps(), 2u);
}

TEST(BypassFilter, RejectsBadObservations) {
  BypassFilter f(2, HyperParams{}, GoviConfig{});
  f.step({Vector::Ones(2), 1.0});
  try {
    f.step({Vector::Ones(2), std::numeric_limits<double>::quiet_NaN()});
    FAIL() << "expected StreamError";
  } catch (const StreamError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
  EXPECT_THROW(f.step({Vector::Ones(3), 1.0}), StreamError);
  Vector bad = Vector::Ones(2);
  bad(1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(f.step({bad, 1.0}), StreamError);
}

TEST(BypassFilter, EpsilonZeroKeepsMuAtZero) {
  HyperParams h;
  h.epsilon = 0.0;
  BypassFilter f(2, h, GoviConfig{});
  for (const auto& obs : helpers::changepoint_design(3, 100)) {
    const auto r = f.step(obs);
    ASSERT_EQ(r.vstate.mu_mean, 0.0);
    ASSERT_EQ(r.vstate.mu_var, 0.0);
  }
}

TEST(Config, Validation) {
  GoviConfig c;
  EXPECT_NO_THROW(c.validate());
  c.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = GoviConfig{};
  c.max_fixed_point_iters = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  HyperParams h;
  h.a = -1.0;
  EXPECT_THROW(BypassFilter(2, h, GoviConfig{}), ConfigError);
}
