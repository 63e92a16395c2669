#include "spconf/bessel.hpp"

#include <cmath>
#include <limits>

#include "spconf/errors.hpp"

namespace spconf {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 40000;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kZeta3 = 1.20205690315959428539973816151144999;

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)  (limit -EulerGamma at mu=0)
// gam2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl,
                  double& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  if (std::abs(mu) < 1e-4) {
    // odd Taylor coefficient of 1/Gamma(1+mu) at mu^3
    const double a3 = kEulerGamma * kEulerGamma * kEulerGamma / 6.0 -
                      kEulerGamma * M_PI * M_PI / 12.0 + kZeta3 / 3.0;
    gam1 = -(kEulerGamma + a3 * mu * mu);
  } else {
    gam1 = (gammi - gampl) / (2.0 * mu);
  }
  gam2 = (gammi + gampl) / 2.0;
}

// Temme series: K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2.
void bessel_k_temme(double mu, double x, double& kmu, double& kmup1) {
  const double x2 = 0.5 * x;
  const double pimu = M_PI * mu;
  const double fact = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  temme_gammas(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu * mu);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - i * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  if (i > kMaxIter) throw DomainError("bessel_k: Temme series did not converge");
  kmu = sum;
  kmup1 = sum1 * 2.0 / x;
}

// Steed's continued fraction (CF2): K_mu(x) and K_{mu+1}(x) for x > 2.
void bessel_k_steed(double mu, double x, double& kmu, double& kmup1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
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
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw DomainError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
  kmup1 = kmu * (mu + x + 0.5 - h) / x;
}

} // namespace

double bessel_k(double nu, double x) {
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw DomainError("bessel_k: order nu must be positive and finite");
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("bessel_k: argument x must be positive and finite");

  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl; // in [-1/2, 1/2]
  double kmu, kmup1;
  if (x <= 2.0)
    bessel_k_temme(mu, x, kmu, kmup1);
  else
    bessel_k_steed(mu, x, kmu, kmup1);
  for (int i = 0; i < nl; ++i) {
    const double knext = (mu + i + 1) * (2.0 / x) * kmup1 + kmu;
    kmu = kmup1;
    kmup1 = knext;
  }
  return kmu;
}

} // namespace spconf
