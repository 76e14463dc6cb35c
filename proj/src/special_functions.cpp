#include "bypass/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kSeriesCrossover = 2.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_bessel_arg(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(name) + ": argument must be positive and finite");
  }
}

struct BesselPair {
  double k0;
  double k1;
};

// Power series about the origin, valid (and accurate to a few ulp) for x <= 2.
BesselPair bessel_k01_series(double x) {
  const double t = 0.25 * x * x;
  const double log_half_x = std::log(0.5 * x);

  // k-th term of sum t^k / (k!)^2 and sum t^k / (k!(k+1)!)
  double term0 = 1.0;
  double term1 = 1.0;
  double harmonic = 0.0;  // H_k
  double i0 = 1.0;
  double i1_sum = 1.0;
  double k0_tail = 0.0;
  double psi_sum = 1.0 - 2.0 * kEulerGamma;  // psi(1) + psi(2)
  double k1_tail = psi_sum;

  for (int k = 1; k < 200; ++k) {
    term0 *= t / (static_cast<double>(k) * k);
    term1 *= t / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    i0 += term0;
    i1_sum += term1;
    k0_tail += term0 * harmonic;
    // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    psi_sum = 2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma;
    k1_tail += term1 * psi_sum;
    if (term0 * harmonic < kEps * 1e-2 * std::abs(k0_tail) && term1 * std::abs(psi_sum) < kEps * 1e-2 * std::abs(k1_tail)) {
      break;
    }
  }

  const double i1 = 0.5 * x * i1_sum;
  BesselPair out{};
  out.k0 = -(log_half_x + kEulerGamma) * i0 + k0_tail;
  out.k1 = 1.0 / x + log_half_x * i1 - 0.25 * x * k1_tail;
  return out;
}

// Steed's method for Temme's second continued fraction at order 0.
// Returns e^x K0(x) and e^x K1(x); converges quickly for x >= 2.
BesselPair bessel_k01_scaled_cf(double x) {
  constexpr int kMaxIter = 100000;
  const double a1 = 0.25;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps * 0.5) {
      break;
    }
  }
  if (i > kMaxIter) {
    throw NumericError("bessel_k01: continued fraction did not converge");
  }
  h *= a1;
  BesselPair out{};
  out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  out.k1 = out.k0 * (x + 0.5 - h) / x;
  return out;
}

BesselPair bessel_k01_scaled(double x) {
  if (x <= kSeriesCrossover) {
    BesselPair p = bessel_k01_series(x);
    const double ex = std::exp(x);
    return {p.k0 * ex, p.k1 * ex};
  }
  return bessel_k01_scaled_cf(x);
}

BesselPair bessel_k01(double x) {
  if (x <= kSeriesCrossover) {
    return bessel_k01_series(x);
  }
  BesselPair p = bessel_k01_scaled_cf(x);
  const double emx = std::exp(-x);
  return {p.k0 * emx, p.k1 * emx};
}

// Continued fraction for the Mills ratio (1 - Phi(z)) / phi(z), z > 0 (modified Lentz).
double mills_ratio_cf(double z) {
  constexpr double kTiny = 1e-300;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    d = z + k * d;
    if (d == 0.0) d = kTiny;
    c = z + k / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return 1.0 / f;
    }
  }
  throw NumericError("mills_ratio_cf: no convergence");
}

void check_finite_or_inf(double z, const char* name) {
  if (std::isnan(z)) {
    throw DomainError(std::string(name) + ": NaN argument");
  }
}

}  // namespace

void NumericGuards::validate() const {
  if (!(rho_floor > 0.0) || !std::isfinite(rho_floor)) {
    throw ConfigError("rho_floor must be positive and finite");
  }
  if (!std::isfinite(log_mass_floor)) {
    throw ConfigError("log_mass_floor must be finite");
  }
}

double bessel_k0(double x) {
  check_bessel_arg(x, "bessel_k0");
  return bessel_k01(x).k0;
}

double bessel_k1(double x) {
  check_bessel_arg(x, "bessel_k1");
  return bessel_k01(x).k1;
}

double bessel_k0e(double x) {
  check_bessel_arg(x, "bessel_k0e");
  return bessel_k01_scaled(x).k0;
}

double bessel_k1e(double x) {
  check_bessel_arg(x, "bessel_k1e");
  return bessel_k01_scaled(x).k1;
}

double gig_beta_mean(double rho, const NumericGuards& guards) {
  if (std::isnan(rho)) {
    throw DomainError("gig_beta_mean: NaN rho");
  }
  const double r = std::max(rho, guards.rho_floor);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("gig_beta_mean: rho must be positive and finite after clamping");
  }
  const double s = std::sqrt(r);
  // The common e^{-s} factor cancels in the ratio, so use the scaled pair.
  const BesselPair p = bessel_k01_scaled(s);
  return p.k0 / (s * p.k1);
}

double std_normal_pdf(double z) {
  check_finite_or_inf(z, "std_normal_pdf");
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double log_std_normal_pdf(double z) {
  check_finite_or_inf(z, "log_std_normal_pdf");
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

double std_normal_cdf(double z) {
  check_finite_or_inf(z, "std_normal_cdf");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double log_std_normal_sf(double z) {
  check_finite_or_inf(z, "log_std_normal_sf");
  // erfc is accurate to a few ulp until its result leaves the normal range.
  constexpr double kCfThreshold = 30.0;
  if (z < kCfThreshold) {
    if (z < -5.0) {
      return std::log1p(-0.5 * std::erfc(-z / std::numbers::sqrt2));
    }
    return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  }
  if (std::isinf(z)) {
    return -std::numeric_limits<double>::infinity();
  }
  return log_std_normal_pdf(z) + std::log(mills_ratio_cf(z));
}

double log_cdf_gap(double l, double u) {
  if (std::isnan(l) || std::isnan(u)) {
    throw DomainError("log_cdf_gap: NaN bound");
  }
  if (!(l < u)) {
    throw DomainError("log_cdf_gap: requires l < u");
  }
  if (l >= 0.0) {
    // Phi(u) - Phi(l) = Q(l) - Q(u)
    const double lq_l = log_std_normal_sf(l);
    const double lq_u = log_std_normal_sf(u);
    return lq_l + std::log(-std::expm1(lq_u - lq_l));
  }
  if (u <= 0.0) {
    // Mirror image: Phi(u) - Phi(l) = Q(-u) - Q(-l)
    const double lq_nu = log_std_normal_sf(-u);
    const double lq_nl = log_std_normal_sf(-l);
    return lq_nu + std::log(-std::expm1(lq_nl - lq_nu));
  }
  // Straddles zero: both halves measured from the centre.
  return std::log(0.5 * (std::erf(u / std::numbers::sqrt2) + std::erf(-l / std::numbers::sqrt2)));
}

}  // namespace bypass
