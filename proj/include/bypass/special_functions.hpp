#pragma once

// Scalar special functions used by the variational updates.
//
// Modified Bessel functions of the second kind use the power series for
// x <= 2 and Steed's continued fraction (Temme's CF2) above. The scaled
// variants return e^x K_nu(x) so ratios stay finite for very large x.

namespace bypass {

struct NumericGuards {
  double rho_floor = 1e-12;
  double log_mass_floor = -1.0e5;

  void validate() const;
};

double bessel_k0(double x);
double bessel_k1(double x);

/// e^x * K0(x)
double bessel_k0e(double x);
/// e^x * K1(x)
double bessel_k1e(double x);

/// Mean of GIG(-1, 1, rho): K0(sqrt(rho)) / (sqrt(rho) K1(sqrt(rho))).
/// rho is clamped to guards.rho_floor first.
double gig_beta_mean(double rho, const NumericGuards& guards = {});

double std_normal_pdf(double z);
double log_std_normal_pdf(double z);
double std_normal_cdf(double z);

/// log(1 - Phi(z)), accurate far into the upper tail.
double log_std_normal_sf(double z);

/// log(Phi(u) - Phi(l)) for l < u without cancellation in either tail.
double log_cdf_gap(double l, double u);

}  // namespace bypass
