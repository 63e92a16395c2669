#ifndef SPCONF_DATAGEN_HPP
#define SPCONF_DATAGEN_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <utility>

#include "spconf/kernels.hpp"
#include "spconf/rng.hpp"

namespace spconf {

// Joint law of the observed field X and the unobserved confounder Z:
//   Cov(X)   = sigma_c^2 R_c + sigma_u^2 R_u
//   Cov(Z)   = sigma_z^2 R_c
//   Cov(X,Z) = rho sigma_c sigma_z R_c
struct ConfoundedFieldSpec {
  double sigma_c2;
  double sigma_u2;
  double sigma_z2;
  double rho;
  CorrelationKernel kernel_c;
  CorrelationKernel kernel_u;
  double mu_x = 0.0;
  double mu_z = 0.0;
  double nugget = 1e-8;

  void validate() const;
  double p_c() const { return sigma_c2 / (sigma_c2 + sigma_u2); }
};

struct GeneratingCoefficients {
  double beta0;
  double beta_x;
  double beta_z;
  double sigma2; // noise variance; 0 permitted for exact-identity checks

  void validate() const;
};

// p_z = beta_z^2 sigma_z^2 / (beta_z^2 sigma_z^2 + sigma^2)
double variance_fraction_z(const GeneratingCoefficients& coeffs, double sigma_z2);

struct Dataset {
  Locations locs;
  Eigen::VectorXd x, z, y;
  GeneratingCoefficients truth;
  std::uint64_t master_seed = 0;
  long replicate = 0;
};

// Draws (x, z) with the exact joint covariance above from three independent
// GP draws sharing one latent:
//   x = mu_x + sigma_c W_c + sigma_u W_u
//   z = mu_z + sigma_z (rho W_c + sqrt(1-rho^2) W_c')
// where W_c, W_c' ~ N(0, R_c) and W_u ~ N(0, R_u), all independent. PSD for
// every |rho| <= 1 with only n x n factorizations.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_confounded_fields(
    const ConfoundedFieldSpec& spec, const Locations& locs, Rng& rng);

// Same, reusing precomputed Cholesky factors of R_c and R_u.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_confounded_fields(
    const ConfoundedFieldSpec& spec, const Eigen::MatrixXd& chol_rc,
    const Eigen::MatrixXd& chol_ru, Rng& rng);

// y_i = beta0 + beta_x x_i + beta_z z_i + eps_i, eps iid N(0, sigma2).
Eigen::VectorXd generate_response(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                                  const GeneratingCoefficients& coeffs, Rng& rng);

// mu_z 1 + rho sigma_c sigma_z R_c' (sigma_c^2 R_c + sigma_u^2 R_u)^{-1} (x - mu_x 1)
Eigen::VectorXd conditional_mean_z_given_x(const Eigen::VectorXd& x,
                                           const ConfoundedFieldSpec& spec,
                                           const Locations& locs);

enum class ArealZMode { Random, Eigenvector };

// z held fixed by the caller across replicates; x = 0.5 z + eps_x with
// eps_x iid N(0, eps_x_sd^2).
Eigen::VectorXd areal_z(ArealZMode mode, const Eigen::SparseMatrix<double>& q,
                        double z_sd, Rng& rng);
Eigen::VectorXd areal_x_given_z(const Eigen::VectorXd& z, double eps_x_sd, Rng& rng);
std::pair<Eigen::VectorXd, Eigen::VectorXd> areal_covariate_pair(
    ArealZMode mode, const Eigen::SparseMatrix<double>& q, double z_sd,
    double eps_x_sd, Rng& rng);

} // namespace spconf

#endif
