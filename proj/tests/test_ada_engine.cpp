#include "bypass/ada_engine.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bypass/errors.hpp"
#include "stream_helpers.hpp"

using namespace bypass;

namespace {

Vector random_vec(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

Matrix random_mat(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = nd(rng);
  return m;
}

GradientState grads_with_psi(double v) {
  GradientState g = GradientState::initial(1);
  for (auto& p : g.psi) p = Vector::Constant(1, v);
  return g;
}

}  // namespace

TEST(HyperUpdate, ZeroResidualIsPassive) {
  const HyperParams h;
  const auto out = pa_hyper_update(h, grads_with_psi(3.0), Vector::Ones(1), 0.0, 500.0);
  EXPECT_EQ(out.hyper.omega(), h.omega());
}

TEST(HyperUpdate, DirectSubstitution) {
  HyperParams h;
  h.a = h.b = h.epsilon = 1.0;
  const auto out = pa_hyper_update(h, grads_with_psi(2.0), Vector::Ones(1), 1.0, 500.0);
  EXPECT_DOUBLE_EQ(out.hyper.a, 2.0);
  EXPECT_DOUBLE_EQ(out.hyper.b, 2.0);
  EXPECT_DOUBLE_EQ(out.hyper.epsilon, 2.0);
}

TEST(HyperUpdate, FloorBinds) {
  HyperParams h;
  h.a = h.b = h.epsilon = 1.0;
  // 1 + 1e-3 * 500 * (-12) * 1 = -5
  const auto out = pa_hyper_update(h, grads_with_psi(-12.0), Vector::Ones(1), 1.0, 500.0);
  EXPECT_DOUBLE_EQ(out.unconstrained[0], -5.0);
  EXPECT_EQ(out.hyper.a, 1e-8);
  EXPECT_EQ(out.hyper.b, 1e-8);
  EXPECT_EQ(out.hyper.epsilon, 1e-8);
}

TEST(HyperUpdate, UsesEachComponentsOwnPsi) {
  HyperParams h;
  h.a = h.b = h.epsilon = 1.0;
  GradientState g = GradientState::initial(1);
  g.psi[0] = Vector::Constant(1, 1.0);
  g.psi[1] = Vector::Constant(1, 0.0);
  g.psi[2] = Vector::Constant(1, -1.0);
  const auto out = pa_hyper_update(h, g, Vector::Ones(1), 1.0, 1000.0);
  EXPECT_DOUBLE_EQ(out.hyper.a, 2.0);
  EXPECT_DOUBLE_EQ(out.hyper.b, 1.0);
  EXPECT_EQ(out.hyper.epsilon, 1e-8);
}

TEST(UpdateS, Cases) {
  const Matrix s = Matrix::Identity(2, 2) * 3.0;
  EXPECT_EQ(update_s(s, Vector::Zero(2), Vector::Ones(2)), s);
  EXPECT_EQ(update_s(Matrix::Zero(2, 2), Vector::Ones(2), Vector::Ones(2)), Matrix::Zero(2, 2));
  EXPECT_DOUBLE_EQ(update_s(Matrix::Ones(1, 1), Vector::Constant(1, 0.5), Vector::Ones(1))(0, 0), 0.25);
}

TEST(UpdateS, CongruenceEqualsThreeTermExpansion) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Index n = 1 + i % 4;
    const Matrix s = random_mat(rng, n);
    const Vector g = random_vec(rng, n);
    const Vector x = random_vec(rng, n);
    const Matrix expanded = s - s * x * g.transpose() - g * x.transpose() * s + g * (x.dot(s * x)) * g.transpose();
    const Matrix got = update_s(s, g, x);
    ASSERT_LE((got - expanded).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, expanded.cwiseAbs().maxCoeff())) << i;
  }
}

TEST(UpdatePsi, Cases) {
  EXPECT_EQ(update_psi(Vector::Zero(2), Vector::Ones(2), Vector::Ones(2), 3.0, Matrix::Zero(2, 2), 1.0),
            Vector::Zero(2));
  const Vector psi = (Vector(2) << 0.3, -0.7).finished();
  EXPECT_EQ(update_psi(psi, Vector::Zero(2), Vector::Ones(2), 3.0, Matrix::Identity(2, 2), 0.0), psi);
  const Vector one = update_psi(Vector::Zero(1), Vector::Constant(1, 0.5), Vector::Ones(1), 2.0,
                                Matrix::Constant(1, 1, 0.25), 1.0);
  EXPECT_DOUBLE_EQ(one(0), 0.5);
}

TEST(UpdatePsi, MatchesScalarTwoTermForm) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(0.01, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double psi = u(rng), g = u(rng), x = u(rng), beta = pos(rng), s = pos(rng), r = u(rng);
    const double want = (1.0 - g * x) * psi + beta * s * x * r;
    const double got = update_psi(Vector::Constant(1, psi), Vector::Constant(1, g), Vector::Constant(1, x), beta,
                                  Matrix::Constant(1, 1, s), r)(0);
    ASSERT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want))) << i;
  }
}

TEST(AdaStep, FirstStepLeavesHyperUnchanged) {
  AdaBypassFilter f(2, HyperParams{}, GoviConfig{});
  const auto r = f.step({(Vector(2) << 1.0, 3.0).finished(), 7.5});
  EXPECT_EQ(r.hyper.omega(), HyperParams{}.omega());
  EXPECT_NE(r.grads.psi[0], Vector::Zero(2));
}

TEST(AdaStep, ZeroResidualStreamIsPassive) {
  AdaBypassFilter f(2, HyperParams{}, GoviConfig{});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto r = f.step({random_vec(rng, 2), 0.0});
    ASSERT_EQ(r.hyper.omega(), HyperParams{}.omega());
    for (const auto& p : r.grads.psi) ASSERT_EQ(p, Vector::Zero(2));
  }
}

TEST(AdaStep, DiffersFromPlainBypassOnceSensitivitiesAreLive) {
  const auto design = helpers::changepoint_design(12, 200);
  AdaBypassFilter ada(2, HyperParams{}, GoviConfig{});
  BypassFilter plain(2, HyperParams{}, GoviConfig{});
  bool psi_live = false;
  bool differed = false;
  for (const auto& obs : design) {
    const auto ra = ada.step(obs);
    const auto rp = plain.step(obs);
    if (!psi_live) {
      ASSERT_EQ(ra.vstate.alpha_mean, rp.vstate.alpha_mean);
    } else if (ra.vstate.alpha_mean != rp.vstate.alpha_mean) {
      differed = true;
      break;
    }
    psi_live = ra.grads.psi[0] != Vector::Zero(2);
  }
  EXPECT_TRUE(differed);
}

TEST(AdaStep, OrderUsesPreviousQuantitiesForHyperStep) {
  const HyperParams h;
  const GoviConfig cfg;
  WeightBelief belief{(Vector(2) << 0.2, 0.4).finished(), Matrix::Identity(2, 2) * 0.01};
  VariationalState vs{900.0, 40.0, 0.3, 0.1};
  GradientState g = GradientState::initial(2);
  for (auto& p : g.psi) p = (Vector(2) << 0.5, -0.2).finished();
  const Observation obs{(Vector(2) << 1.0, 2.0).finished(), 3.0};
  const auto r = ada_bypass_step(belief, vs, h, g, obs, cfg);
  const double residual = 3.0 - obs.x.dot(belief.mean) - vs.mu_mean;
  const auto expected = pa_hyper_update(h, g, obs.x, residual, vs.beta_mean);
  EXPECT_EQ(r.hyper.omega(), expected.hyper.omega());
  const auto govi = bypass_step(belief, vs, expected.hyper, obs, cfg);
  EXPECT_EQ(r.belief.mean, govi.belief.mean);
  EXPECT_EQ(r.vstate.beta_mean, govi.vstate.beta_mean);
}

TEST(AdaStep, MissingOutputPassesStateThrough) {
  AdaBypassFilter f(2, HyperParams{}, GoviConfig{});
  f.step({Vector::Ones(2), 1.0});
  f.step({Vector::Ones(2), 2.0});
  const auto hyper = f.hyper();
  const auto psi = f.grads().psi[1];
  const auto r = f.step({Vector::Ones(2), std::nullopt});
  EXPECT_EQ(r.hyper.omega(), hyper.omega());
  EXPECT_EQ(r.grads.psi[1], psi);
}

TEST(AdaStep, KktAndFinitenessUnderAdversarialStream) {
  AdaBypassFilter f(2, HyperParams{}, GoviConfig{});
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mag(10.0, 1000.0);
  for (int t = 0; t < 20000; ++t) {
    const double sign = (t % 2 == 0) ? 1.0 : -1.0;
    const auto r = f.step({(Vector(2) << 1.0, sign * mag(rng) * 0.01).finished(), sign * mag(rng)});
    const auto w = r.hyper.omega();
    for (std::size_t j = 0; j < HyperParams::kCount; ++j) {
      ASSERT_TRUE(std::isfinite(w[j])) << t;
      ASSERT_GE(w[j], r.hyper.omega_min[j]) << t;
      ASSERT_LE(std::abs((w[j] - r.hyper.omega_min[j]) * (w[j] - r.unconstrained[j])), 1e-12) << t;
    }
    ASSERT_TRUE(r.grads.all_finite()) << t;
  }
}

TEST(AdaFilter, RejectsHyperBelowFloor) {
  HyperParams h;
  h.epsilon = 0.0;
  EXPECT_THROW(AdaBypassFilter(2, h, GoviConfig{}), ConfigError);
}
