#include "bypass/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

void check_not_nan(double v, const char* what) {
  if (std::isnan(v)) {
    throw DomainError(std::string(what) + ": NaN argument");
  }
}

// K_nu for nu in {-1, 0, 1}, in log form so large arguments do not underflow.
double log_bessel_k_int(double nu, double x) {
  if (nu == 0.0) {
    return std::log(bessel_k0e(x)) - x;
  }
  if (nu == 1.0 || nu == -1.0) {
    return std::log(bessel_k1e(x)) - x;
  }
  throw DomainError("gig_pdf: only orders -1, 0, 1 are supported");
}

}  // namespace

void EpsNoiseModel::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("epsilon must be finite and >= 0");
  }
}

void GigParams::validate() const {
  if (!(chi > 0.0) || !(rho > 0.0) || !std::isfinite(chi) || !std::isfinite(rho)) {
    throw DomainError("GIG requires chi > 0 and rho > 0");
  }
  if (nu != -1.0 && nu != 0.0 && nu != 1.0) {
    throw DomainError("gig_pdf: only orders -1, 0, 1 are supported");
  }
}

void TruncGaussSpec::validate() const {
  check_not_nan(location, "TruncGaussSpec.location");
  if (!(precision > 0.0) || !std::isfinite(precision)) {
    throw DomainError("TruncGaussSpec.precision must be positive and finite");
  }
  if (!(lower < upper)) {
    throw DomainError("TruncGaussSpec requires lower < upper");
  }
}

void ThetaPrior::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("ThetaPrior requires a > 0 and b > 0");
  }
  EpsNoiseModel{epsilon}.validate();
}

double eps_noise_density(double eta, const EpsNoiseModel& model) {
  check_not_nan(eta, "eps_noise_density");
  model.validate();
  const double eps = model.epsilon;
  return std::exp(-std::max(std::abs(eta) - eps, 0.0)) / (2.0 * (1.0 + eps));
}

double eps_noise_mixture_density(double eta, const EpsNoiseModel& model) {
  check_not_nan(eta, "eps_noise_mixture_density");
  model.validate();
  const double eps = model.epsilon;
  if (!(eps > 0.0)) {
    throw DomainError("eps_noise_mixture_density: epsilon must be > 0 (uniform component degenerates)");
  }
  const double pi = eps / (1.0 + eps);
  if (std::abs(eta) <= eps) {
    return pi / (2.0 * eps);
  }
  // Laplace(0, 1) restricted to |eta| > eps and renormalised by its mass e^{-eps}.
  const double truncated_laplace = 0.5 * std::exp(eps - std::abs(eta));
  return (1.0 - pi) * truncated_laplace;
}

double eps_noise_variance(const EpsNoiseModel& model) {
  model.validate();
  const double e = model.epsilon;
  return (e * e * e / 3.0 + e * e + 2.0 * e + 2.0) / (1.0 + e);
}

double cmog_density(double eta, const EpsNoiseModel& model, int quad_points) {
  check_not_nan(eta, "cmog_density");
  model.validate();
  if (quad_points < 64) {
    throw DomainError("cmog_density: quad_points must be >= 64");
  }
  const double eps = model.epsilon;
  const double atom_weight = 1.0 / (2.0 * (1.0 + eps));

  // Conditional density of eta given beta, with mu integrated against Ubar.
  auto given_beta = [&](double beta) {
    const double sb = std::sqrt(beta);
    double core = 0.0;
    if (eps > 0.0) {
      core = std::exp(log_cdf_gap(sb * (eta - eps), sb * (eta + eps)));
    }
    const double atoms = sb * (std_normal_pdf(sb * (eta + eps)) + std_normal_pdf(sb * (eta - eps)));
    return atom_weight * (core + atoms);
  };

  // IG(beta | 1, 1/2) = beta^{-2} e^{-1/(2 beta)} / 2 under beta = t / (1 - t).
  auto integrand = [&](double t) {
    if (t <= 0.0 || t >= 1.0) {
      return 0.0;
    }
    const double beta = t / (1.0 - t);
    const double log_weight = std::log(0.5) - 2.0 * std::log(t) - (1.0 - t) / (2.0 * t);
    return std::exp(log_weight) * given_beta(beta);
  };

  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  double total_error = 0.0;
  const double width = 1.0 / quad_points;
  for (int panel = 0; panel < quad_points; ++panel) {
    const double lo = panel * width;
    const double hi = (panel + 1 == quad_points) ? 1.0 : lo + width;
    double err = 0.0;
    if (panel + 1 == quad_points) {
      // The atoms behave like (1 - t)^{-1/2} at t = 1 when eta = +-eps.
      boost::math::quadrature::tanh_sinh<double> ts;
      total += ts.integrate(integrand, lo, hi, 1e-10, &err);
    } else {
      total += Kronrod::integrate(integrand, lo, hi, 10, 1e-10, &err);
    }
    total_error += err;
  }
  if (!std::isfinite(total) || total_error > 1e-6 * std::max(total, 1e-300) + 1e-12) {
    throw NumericError("cmog_density: quadrature did not converge");
  }
  return total;
}

TruncGaussMoments trunc_gauss_moments(const TruncGaussSpec& spec, const NumericGuards& guards) {
  spec.validate();
  const double sp = std::sqrt(spec.precision);
  const double inv_prec = 1.0 / spec.precision;
  const double l = sp * (spec.lower - spec.location);
  const double u = sp * (spec.upper - spec.location);

  const double log_mass = log_cdf_gap(l, u);
  if (!(log_mass >= guards.log_mass_floor)) {
    // Degenerate truncation: essentially all mass sits at the nearer bound.
    const double bound = spec.location >= spec.upper   ? spec.upper
                         : spec.location <= spec.lower ? spec.lower
                                                       : spec.location;
    return {bound, 1e-12 * inv_prec};
  }

  const double ratio_l = std::isinf(l) ? 0.0 : std::exp(log_std_normal_pdf(l) - log_mass);
  const double ratio_u = std::isinf(u) ? 0.0 : std::exp(log_std_normal_pdf(u) - log_mass);
  const double diff = ratio_l - ratio_u;
  const double l_term = std::isinf(l) ? 0.0 : l * ratio_l;
  const double u_term = std::isinf(u) ? 0.0 : u * ratio_u;

  TruncGaussMoments out{};
  out.mean = std::clamp(spec.location + diff / sp, spec.lower, spec.upper);
  const double bracket = 1.0 + l_term - u_term - diff * diff;
  out.variance = std::clamp(bracket, 1e-12, 1.0) * inv_prec;
  return out;
}

double gig_pdf(double r, const GigParams& params) {
  check_not_nan(r, "gig_pdf");
  params.validate();
  if (!(r > 0.0)) {
    throw DomainError("gig_pdf: r must be > 0");
  }
  if (std::isinf(r)) {
    return 0.0;
  }
  const double nu = params.nu;
  const double chi = params.chi;
  const double rho = params.rho;
  const double log_norm = 0.5 * nu * std::log(rho / chi) - std::log(2.0) - log_bessel_k_int(nu, std::sqrt(chi * rho));
  const double log_kernel = (nu - 1.0) * std::log(r) - 0.5 * (chi / r + rho * r);
  return std::exp(log_norm + log_kernel);
}

double ubar_variance(double epsilon) {
  EpsNoiseModel{epsilon}.validate();
  return epsilon * epsilon * (1.0 + epsilon / 3.0) / (1.0 + epsilon);
}

double beta2_mean(const BetaSecondKind& prior) {
  if (!(prior.s > 1.0) || !std::isfinite(prior.s)) {
    throw DomainError("beta2_mean: shape s must exceed 1");
  }
  return prior.s / (prior.s - 1.0);
}

}  // namespace bypass
