#include "spconf/datagen.hpp"

#include <cmath>

#include "spconf/errors.hpp"
#include "spconf/laplacian.hpp"

namespace spconf {

void ConfoundedFieldSpec::validate() const {
  if (!(sigma_c2 > 0.0)) throw DomainError("ConfoundedFieldSpec: sigma_c2 must be > 0");
  if (!(sigma_u2 >= 0.0)) throw DomainError("ConfoundedFieldSpec: sigma_u2 must be >= 0");
  if (!(sigma_z2 > 0.0)) throw DomainError("ConfoundedFieldSpec: sigma_z2 must be > 0");
  if (!(rho >= -1.0 && rho <= 1.0))
    throw DomainError("ConfoundedFieldSpec: rho must lie in [-1, 1]");
  if (!std::isfinite(mu_x) || !std::isfinite(mu_z))
    throw DomainError("ConfoundedFieldSpec: process means must be finite");
  if (!(nugget >= 0.0)) throw DomainError("ConfoundedFieldSpec: nugget must be >= 0");
}

void GeneratingCoefficients::validate() const {
  if (!std::isfinite(beta0) || !std::isfinite(beta_x) || !std::isfinite(beta_z))
    throw DomainError("GeneratingCoefficients: coefficients must be finite");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw DomainError("GeneratingCoefficients: sigma2 must be finite and >= 0");
}

double variance_fraction_z(const GeneratingCoefficients& coeffs, double sigma_z2) {
  const double signal = coeffs.beta_z * coeffs.beta_z * sigma_z2;
  return signal / (signal + coeffs.sigma2);
}

namespace {

Eigen::VectorXd gp_draw(const Eigen::MatrixXd& chol_lower, Rng& rng) {
  Eigen::VectorXd eta(chol_lower.rows());
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = rng.normal();
  return chol_lower.triangularView<Eigen::Lower>() * eta;
}

} // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_confounded_fields(
    const ConfoundedFieldSpec& spec, const Locations& locs, Rng& rng) {
  spec.validate();
  const auto rc = correlation_matrix(locs, spec.kernel_c, spec.nugget);
  const auto ru = correlation_matrix(locs, spec.kernel_u, spec.nugget);
  const Eigen::MatrixXd lc = cholesky(rc, "sample_confounded_fields: R_c").matrixL();
  const Eigen::MatrixXd lu = cholesky(ru, "sample_confounded_fields: R_u").matrixL();
  return sample_confounded_fields(spec, lc, lu, rng);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_confounded_fields(
    const ConfoundedFieldSpec& spec, const Eigen::MatrixXd& chol_rc,
    const Eigen::MatrixXd& chol_ru, Rng& rng) {
  spec.validate();
  const Eigen::VectorXd w_c = gp_draw(chol_rc, rng);
  const Eigen::VectorXd w_u = gp_draw(chol_ru, rng);
  const Eigen::VectorXd w_c2 = gp_draw(chol_rc, rng);
  const double sigma_c = std::sqrt(spec.sigma_c2);
  const double sigma_u = std::sqrt(spec.sigma_u2);
  const double sigma_z = std::sqrt(spec.sigma_z2);
  Eigen::VectorXd x =
      (spec.mu_x + (sigma_c * w_c + sigma_u * w_u).array()).matrix();
  Eigen::VectorXd z =
      (spec.mu_z +
       (sigma_z * (spec.rho * w_c + std::sqrt(1.0 - spec.rho * spec.rho) * w_c2))
           .array())
          .matrix();
  return {std::move(x), std::move(z)};
}

Eigen::VectorXd generate_response(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                                  const GeneratingCoefficients& coeffs, Rng& rng) {
  coeffs.validate();
  if (x.size() != z.size())
    throw DomainError("generate_response: x and z lengths differ");
  const double sd = std::sqrt(coeffs.sigma2);
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y(i) = coeffs.beta0 + coeffs.beta_x * x(i) + coeffs.beta_z * z(i) +
           sd * rng.normal();
  return y;
}

Eigen::VectorXd conditional_mean_z_given_x(const Eigen::VectorXd& x,
                                           const ConfoundedFieldSpec& spec,
                                           const Locations& locs) {
  spec.validate();
  if (x.size() != locs.size())
    throw DomainError("conditional_mean_z_given_x: x length != number of locations");
  const auto rc = correlation_matrix(locs, spec.kernel_c, spec.nugget);
  const auto ru = correlation_matrix(locs, spec.kernel_u, spec.nugget);
  const Eigen::MatrixXd cov_x = spec.sigma_c2 * rc + spec.sigma_u2 * ru;
  const auto llt = cholesky(cov_x, "conditional_mean_z_given_x: Cov(X)");
  const Eigen::VectorXd centered =
      x - Eigen::VectorXd::Constant(x.size(), spec.mu_x);
  const double cross = spec.rho * std::sqrt(spec.sigma_c2 * spec.sigma_z2);
  return Eigen::VectorXd::Constant(x.size(), spec.mu_z) +
         cross * (rc.transpose() * llt.solve(centered));
}

Eigen::VectorXd areal_z(ArealZMode mode, const Eigen::SparseMatrix<double>& q,
                        double z_sd, Rng& rng) {
  if (mode == ArealZMode::Eigenvector)
    return smallest_nonzero_eigenvector(q).vector;
  Eigen::VectorXd z(q.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = z_sd * rng.normal();
  return z;
}

Eigen::VectorXd areal_x_given_z(const Eigen::VectorXd& z, double eps_x_sd, Rng& rng) {
  Eigen::VectorXd x(z.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = 0.5 * z(i) + eps_x_sd * rng.normal();
  return x;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> areal_covariate_pair(
    ArealZMode mode, const Eigen::SparseMatrix<double>& q, double z_sd,
    double eps_x_sd, Rng& rng) {
  Eigen::VectorXd z = areal_z(mode, q, z_sd, rng);
  Eigen::VectorXd x = areal_x_given_z(z, eps_x_sd, rng);
  return {std::move(z), std::move(x)};
}

} // namespace spconf
