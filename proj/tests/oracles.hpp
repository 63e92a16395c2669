#ifndef SPCONF_TEST_ORACLES_HPP
#define SPCONF_TEST_ORACLES_HPP

#include <Eigen/Dense>

#include "spconf/metric.hpp"

namespace spconf::test {

// K_nu(x) from the integral representation
//   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
// evaluated with 256-bit MPFR arithmetic and a fine trapezoid (the integrand
// decays double-exponentially, so the rule converges spectrally). Independent
// of the series/continued-fraction production path.
double bessel_k_reference(double nu, double x);

// gsl_sf_bessel_Knu, a second independent double-precision anchor
double bessel_k_gsl(double nu, double x);

// random SPD matrix with eigenvalues in [lo, hi]
Eigen::MatrixXd random_spd(int n, double lo, double hi, unsigned seed);

} // namespace spconf::test

#endif
