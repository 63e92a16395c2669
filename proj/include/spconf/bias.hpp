#ifndef SPCONF_BIAS_HPP
#define SPCONF_BIAS_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "spconf/datagen.hpp"
#include "spconf/estimators.hpp"
#include "spconf/metric.hpp"
#include "spconf/smoothers.hpp"

namespace spconf {

// Closed-form expected bias for one model on one instance. The convention is
// E(beta_hat_x) - beta_x throughout. Components, where present, sum to the
// total.
struct BiasReport {
  Model model;
  double bias = 0.0;
  std::vector<std::pair<std::string, double>> components;
};

// K = p_c (p_c I + (1 - p_c) R_u R_c^{-1})^{-1}, evaluated through the
// equivalent factored form p_c R_c (p_c R_c + (1 - p_c) R_u)^{-1} so only one
// SPD solve is needed. Identity when p_c = 1.
Eigen::MatrixXd compute_K(double p_c, const Eigen::MatrixXd& r_u,
                          const Eigen::MatrixXd& r_c);

// beta_z rho (sigma_z/sigma_c) [ (X*'X*)^{-1} X*' K (x - mu_x 1) ]_2
double bias_nonspatial_stochastic(const Eigen::VectorXd& x,
                                  const ConfoundedFieldSpec& spec,
                                  const Locations& locs,
                                  const GeneratingCoefficients& coeffs);

// beta_z rho (sigma_z/sigma_c)
//   [ (X*' Sigma^{-1} X*)^{-1} X*' Sigma^{-1} K (x - mu_x 1) ]_2
// with Sigma = beta_z^2 sigma_z^2 R_c + sigma^2 I.
double bias_spatial_stochastic(const Eigen::VectorXd& x,
                               const ConfoundedFieldSpec& spec,
                               const Locations& locs,
                               const GeneratingCoefficients& coeffs);

// beta_z (||1||^2 <x,z> - <x,1><z,1>) / (||1||^2 ||x||^2 - <x,1>^2),
// Euclidean inner products.
double bias_ols_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                      double beta_z);

// Same expression under the inner products induced by the precision metric.
double bias_gls_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                      double beta_z, const PrecisionMetric& m);

// Bias of the adjusted fit of y on r_x = (I - S_x) x under metric M:
//   A2*(r_x,x) = beta_x ((||1||^2 <r_x,x> - <r_x,1><x,1>) / D - 1)
//   B2 (r_x,x) = beta_z  (||1||^2 <r_x,z> - <r_x,1><z,1>) / D
// with D = ||1||^2 ||r_x||^2 - <r_x,1>^2, everything under M. Vanishing
// numerator and denominator resolve through the 0/0 = 0 convention.
BiasReport bias_spatialplus_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                                  double beta_x, double beta_z,
                                  const LinearSmoother& smoother_x,
                                  const PrecisionMetric& m);

// Bias of the OLS fit of r_y = (I - S_y) y on r_x = (I - S_x) x, via the
// mixed inner products <a, (I - S_y) b> with Euclidean denominators.
// Components reported as A2* = A2 - beta_x and B2 so they sum to the total.
BiasReport bias_gsem_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                           double beta_x, double beta_z,
                           const LinearSmoother& smoother_x,
                           const LinearSmoother& smoother_y);

} // namespace spconf

#endif
