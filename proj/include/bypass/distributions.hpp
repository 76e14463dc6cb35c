#pragma once

#include "bypass/special_functions.hpp"

namespace bypass {

/// Noise model induced by the epsilon-insensitive loss: flat on [-eps, eps],
/// Laplace tails outside.
struct EpsNoiseModel {
  double epsilon = 0.0;

  void validate() const;
};

struct GigParams {
  double nu = -1.0;
  double chi = 1.0;
  double rho = 1.0;

  void validate() const;
};

/// Gaussian N(location, 1/precision) truncated to [lower, upper].
struct TruncGaussSpec {
  double location = 0.0;
  double precision = 1.0;
  double lower = -1.0;
  double upper = 1.0;

  void validate() const;
};

struct TruncGaussMoments {
  double mean;
  double variance;
};

/// Prior factorisation G(alpha|a,b) IG(beta|1,1/2) Ubar(mu|-eps,eps).
struct ThetaPrior {
  double a = 1000.0;
  double b = 1.0;
  double epsilon = 1.25;

  void validate() const;
  double alpha_mean() const { return a / b; }
};

/// Symmetric Beta distribution of the second kind over epsilon.
struct BetaSecondKind {
  double s = 5.0;
};

double eps_noise_density(double eta, const EpsNoiseModel& model);

/// Same density written as pi * Uniform(-eps, eps) + (1 - pi) * truncated Laplace,
/// pi = eps / (1 + eps). Requires eps > 0.
double eps_noise_mixture_density(double eta, const EpsNoiseModel& model);

/// Variance of the epsilon-insensitive noise density.
double eps_noise_variance(const EpsNoiseModel& model);

/// Numerical evaluation of the continuous mixture of Gaussians
///   int int N(eta | mu, 1/beta) Ubar(mu | -eps, eps) IG(beta | 1, 1/2) dmu dbeta.
/// The uniform core of Ubar is integrated in closed form and its two atoms are
/// added exactly; the beta integral is compactified with beta = t / (1 - t) and
/// integrated adaptively over quad_points panels. Intended as a test oracle.
double cmog_density(double eta, const EpsNoiseModel& model, int quad_points = 64);

TruncGaussMoments trunc_gauss_moments(const TruncGaussSpec& spec, const NumericGuards& guards = {});

/// Normalised GIG density. Only orders nu in {-1, 0, 1} are supported.
double gig_pdf(double r, const GigParams& params);

/// Var[Ubar(mu | -eps, eps)] = eps^2 (1 + eps/3) / (1 + eps).
double ubar_variance(double epsilon);

double beta2_mean(const BetaSecondKind& prior);

}  // namespace bypass
