#ifndef SPCONF_MCMC_HPP
#define SPCONF_MCMC_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "spconf/estimators.hpp"
#include "spconf/rng.hpp"

namespace spconf {

struct McmcConfig {
  long iterations = 80000;
  long burn_in = 20000;
  double prior_shape = 0.01;
  double prior_rate = 0.01;

  void validate() const;
  long retained() const { return iterations - burn_in; }

  static McmcConfig desk() { return McmcConfig{8000, 2000, 0.01, 0.01}; }
  static McmcConfig paper() { return McmcConfig{80000, 20000, 0.01, 0.01}; }
};

struct MCMCChain {
  long iterations = 0;
  long burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<double> beta_x;
  std::vector<double> sigma2;
  std::vector<double> tau2; // spatial chains only
  // largest |sum of w| observed across retained iterations, computed with
  // sequential_sum after recentering; 0.0 when recentering is exact
  double max_abs_w_sum = 0.0;

  long retained() const { return iterations - burn_in; }
};

struct GibbsResult {
  FitResult fit;
  MCMCChain chain;
};

// Left-to-right summation. The recentering below pins the last element so
// that this exact summation order returns 0.0 bit-for-bit.
double sequential_sum(const Eigen::VectorXd& v);

// Subtract the mean, then absorb the leftover rounding residual into the
// last element so sequential_sum(v) == 0.0 exactly.
void recenter_sum_to_zero(Eigen::VectorXd& v);

// Gibbs sampler for y = beta_x x + w + eps (no explicit intercept; the
// connected-graph ICAR effect carries an implicit one), with improper prior
// w ~ N(0, (tau^2 Q)^-) and Inverse-Gamma(prior_shape, prior_rate) priors on
// sigma^2 and tau^2. Cycle:
//   beta_x | .  ~ N(x'(y - w)/x'x, sigma^2/x'x)
//   w      | .  ~ N_n with precision (tau^2 Q + I/sigma^2), sparse Cholesky,
//                 then recentered to sum to zero
//   sigma^2| .  ~ IG(shape + n/2, rate + ||y - beta_x x - w||^2/2)
//   tau^2  | .  ~ IG(shape + (n-1)/2, rate + w'Qw/2)
// Point estimates are posterior means over retained draws.
GibbsResult fit_icar_gibbs(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Eigen::SparseMatrix<double>& q,
                           const McmcConfig& config, Rng& rng);

// Two-block Gibbs on (beta, sigma^2) for y = beta0 + beta_x x + eps with a
// flat prior on beta and the same Inverse-Gamma prior on sigma^2.
GibbsResult fit_bayes_ols_gibbs(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                const McmcConfig& config, Rng& rng);

} // namespace spconf

#endif
