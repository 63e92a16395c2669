#ifndef SPCONF_BESSEL_HPP
#define SPCONF_BESSEL_HPP

namespace spconf {

// Modified Bessel function of the second kind K_nu(x) for real nu > 0, x > 0.
//
// Small arguments (x <= 2) use the Temme series for orders in [-1/2, 1/2];
// larger arguments use Steed's continued-fraction evaluation. Either route
// produces (K_mu, K_{mu+1}) which is then carried up to nu by the standard
// recurrence K_{v+1} = (2v/x) K_v + K_{v-1}.
double bessel_k(double nu, double x);

} // namespace spconf

#endif
