//==============================================================================
// specfun.cpp
// Gamma via the 9-term Lanczos approximation (g = 7). K_nu via Temme's series
// for x <= 2 and the Thompson-Barnett continued fraction (CF2) above, with
// upward recurrence from the reduced order mu = nu - round(nu) in [-1/2, 1/2].
// The CF2 branch natively produces exp(x)*K_nu(x), which is what the scaled
// interface returns.
//==============================================================================
#include "genads/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace genads::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double lanczos_core(double x) {
  // Lanczos g = 7, n = 9 coefficients; valid for x >= 0.5.
  static const double c[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// Gamma1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu) and
// Gamma2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2 for |mu| <= 1/2.
// The difference cancels near mu = 0, so a zeta series is used there:
// 1/Gamma(1 +- mu) = exp(h_e +- h_o) with
//   h_o = gamma mu + zeta(3) mu^3/3 + zeta(5) mu^5/5 + ...
//   h_e = -zeta(2) mu^2/2 - zeta(4) mu^4/4 - ...
// giving Gamma1 = -exp(h_e) sinh(h_o)/mu.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl,
                  double& gammi) {
  gampl = 1.0 / gamma(1.0 + mu);
  gammi = 1.0 / gamma(1.0 - mu);
  gam2 = 0.5 * (gammi + gampl);
  if (std::abs(mu) >= 0.1) {
    gam1 = (gammi - gampl) / (2.0 * mu);
    return;
  }
  static const double euler = 0.57721566490153286060651209008240243;
  static const double zeta_odd[] = {1.2020569031595942854,   // zeta(3)
                                    1.0369277551433699263,   // zeta(5)
                                    1.0083492773819228268,   // zeta(7)
                                    1.0020083928260822144,   // zeta(9)
                                    1.0004941886041194646,   // zeta(11)
                                    1.0001227133475784891};  // zeta(13)
  static const double zeta_even[] = {1.6449340668482264365,   // zeta(2)
                                     1.0823232337111381916,   // zeta(4)
                                     1.0173430619844491397,   // zeta(6)
                                     1.0040773561979443394,   // zeta(8)
                                     1.0009945751278180853,   // zeta(10)
                                     1.0002460865533080483};  // zeta(12)
  const double mu2 = mu * mu;
  double ho_over_mu = euler;  // h_o / mu
  double pw = mu2;
  for (int i = 0; i < 6; ++i) {
    ho_over_mu += zeta_odd[i] * pw / (2 * i + 3);
    pw *= mu2;
  }
  double he = 0.0;
  pw = mu2;
  for (int i = 0; i < 6; ++i) {
    he -= zeta_even[i] * pw / (2 * i + 2);
    pw *= mu2;
  }
  const double ho = ho_over_mu * mu;
  const double sinh_ratio =
      (std::abs(ho) < 1e-8) ? 1.0 + ho * ho / 6.0 : std::sinh(ho) / ho;
  gam1 = -std::exp(he) * sinh_ratio * ho_over_mu;
}

// exp(x) * (K_mu(x), K_{mu+1}(x)) for |mu| <= 1/2, x <= 2 (Temme series).
void k_series(double mu, double x, double& kmu, double& kmu1) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double x2 = 0.5 * x;
  const double pimu = kPi * mu;
  const double fact = (pimu == 0.0) ? 1.0 : pimu / std::sin(pimu);
  const double lg = -std::log(x2);
  const double e = mu * lg;
  const double fact2 = (std::abs(e) < 1e-8) ? 1.0 + e * e / 6.0
                                            : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  temme_gammas(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * lg);
  double sum = ff;
  const double ex = std::exp(e);  // (2/x)^mu
  double p = 0.5 * ex / gampl;
  double q = 0.5 / (ex * gammi);
  double c = 1.0;
  const double d = x2 * x2;
  double sum1 = p;
  const double mu2 = mu * mu;
  for (int i = 1; i <= 500; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - i * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  const double scale = std::exp(x);
  kmu = sum * scale;
  kmu1 = sum1 * (2.0 / x) * scale;
}

// exp(x) * (K_mu(x), K_{mu+1}(x)) for |mu| <= 1/2, x > 2 (CF2, Steed form).
void k_cf2(double mu, double x, double& kmu, double& kmu1) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i <= 5000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) * a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) break;
  }
  h = a1 * h;
  kmu = std::sqrt(kPi / (2.0 * x)) / s;  // exp(x) folded out
  kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

double k_scaled_impl(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;  // in [-1/2, 1/2]
  double kmu, kmu1;
  if (x <= 2.0)
    k_series(mu, x, kmu, kmu1);
  else
    k_cf2(mu, x, kmu, kmu1);
  const double xi = 2.0 / x;
  for (int i = 1; i <= nl; ++i) {
    const double next = kmu + (mu + i) * xi * kmu1;
    kmu = kmu1;
    kmu1 = next;
  }
  return kmu;
}

}  // namespace

double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error("specfun::gamma: require finite x > 0, got " +
                            std::to_string(x));
  if (x < 0.5) return lanczos_core(x + 2.0) / (x * (x + 1.0));
  return lanczos_core(x);
}

BesselResult bessel_k(double nu, double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error("specfun::bessel_k: require finite x > 0, got " +
                            std::to_string(x));
  if (!std::isfinite(nu) || nu < 0.0)
    throw std::domain_error(
        "specfun::bessel_k: require finite nu >= 0 (use evenness for "
        "negative orders), got " + std::to_string(nu));
  const double scaled = k_scaled_impl(nu, x);
  if (x < 690.0) return {scaled * std::exp(-x), false};
  return {scaled, true};
}

double bessel_k_scaled(double nu, double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error(
        "specfun::bessel_k_scaled: require finite x > 0, got " +
        std::to_string(x));
  if (!std::isfinite(nu) || nu < 0.0)
    throw std::domain_error(
        "specfun::bessel_k_scaled: require finite nu >= 0, got " +
        std::to_string(nu));
  return k_scaled_impl(nu, x);
}

double c_delta(double delta, int d) {
  if (!(delta > 0.5 * d))
    throw std::domain_error(
        "specfun::c_delta: standard quantization requires delta > d/2 (delta=" +
        std::to_string(delta) + ", d=" + std::to_string(d) + ")");
  return gamma(delta) / (std::pow(kPi, 0.5 * d) * gamma(delta - 0.5 * d));
}

}  // namespace genads::specfun
