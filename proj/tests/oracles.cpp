#include "oracles.hpp"

#include <gsl/gsl_sf_bessel.h>
#include <mpfr.h>

#include "spconf/rng.hpp"

namespace spconf::test {

double bessel_k_reference(double nu, double x) {
  constexpr mpfr_prec_t prec = 256;
  constexpr double h = 0.005;
  mpfr_t sum, term, c, arg, t, nuf, xf, ratio;
  mpfr_inits2(prec, sum, term, c, arg, t, nuf, xf, ratio, (mpfr_ptr)0);
  mpfr_set_d(nuf, nu, MPFR_RNDN);
  mpfr_set_d(xf, x, MPFR_RNDN);

  // t = 0 endpoint with half weight: exp(-x) / 2
  mpfr_neg(arg, xf, MPFR_RNDN);
  mpfr_exp(sum, arg, MPFR_RNDN);
  mpfr_div_ui(sum, sum, 2, MPFR_RNDN);

  for (long k = 1; k < 4000000; ++k) {
    mpfr_set_d(t, h * static_cast<double>(k), MPFR_RNDN);
    mpfr_cosh(c, t, MPFR_RNDN);
    mpfr_mul(arg, c, xf, MPFR_RNDN);
    mpfr_neg(arg, arg, MPFR_RNDN);
    mpfr_exp(term, arg, MPFR_RNDN);
    mpfr_mul(c, t, nuf, MPFR_RNDN);
    mpfr_cosh(c, c, MPFR_RNDN);
    mpfr_mul(term, term, c, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    if (k > 200) {
      mpfr_div(ratio, term, sum, MPFR_RNDN);
      if (std::abs(mpfr_get_d(ratio, MPFR_RNDN)) < 1e-80) break;
    }
  }
  mpfr_mul_d(sum, sum, h, MPFR_RNDN);
  const double out = mpfr_get_d(sum, MPFR_RNDN);
  mpfr_clears(sum, term, c, arg, t, nuf, xf, ratio, (mpfr_ptr)0);
  return out;
}

double bessel_k_gsl(double nu, double x) { return gsl_sf_bessel_Knu(nu, x); }

Eigen::MatrixXd random_spd(int n, double lo, double hi, unsigned seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd evals(n);
  for (int i = 0; i < n; ++i) evals(i) = rng.uniform(lo, hi);
  return q * evals.asDiagonal() * q.transpose();
}

} // namespace spconf::test
