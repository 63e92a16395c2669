#ifndef SPCONF_EXPERIMENTS_HPP
#define SPCONF_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spconf/datagen.hpp"
#include "spconf/estimators.hpp"
#include "spconf/mcmc.hpp"

namespace spconf {

// Geostatistical study: locations sampled once on the window and frozen;
// (x, z) drawn from exponential fields per (theta_c, theta_u, rho) cell;
// y = beta0 + beta_x x + beta_z z + eps; five models fit per replicate.
struct GeostatStudyConfig {
  int n = 400;
  double window_lo = 0.0;
  double window_hi = 10.0;
  std::vector<double> theta_c_grid{1.0, 5.0, 10.0};
  std::vector<double> theta_u_grid{1.0, 5.0, 10.0};
  std::vector<double> rho_grid{-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};
  int replicates = 100;
  double sigma_c2 = 0.1;
  double sigma_u2 = 0.1;
  double sigma_z2 = 0.1;
  GeneratingCoefficients coeffs{0.3, 3.0, 1.0, 0.1};
  std::vector<Model> models{Model::Ols, Model::SReml, Model::Ps, Model::SPlus,
                            Model::Gsem};
  std::uint64_t seed = 0;
  double nugget = 1e-8;

  void validate() const;
  void apply_desk_preset() { n = 100; replicates = 30; }
};

// Areal study on a square grid: z fixed per mode, x and eps regenerated per
// replicate, ICAR/Bayesian-OLS plus the spline pipelines on cell centroids.
struct ArealStudyConfig {
  int grid_side = 11;
  ArealZMode z_mode = ArealZMode::Random;
  double beta_z = 0.0;
  double beta_x = 3.0;
  double z_sd = 0.09;
  double eps_x_sd = 0.01;
  double eps_sd = 0.15;
  int replicates = 100;
  McmcConfig mcmc = McmcConfig::paper();
  std::vector<Model> models{Model::BayesOls, Model::Icar, Model::Ps,
                            Model::SPlus, Model::Gsem};
  std::uint64_t seed = 0;

  void validate() const;
  void apply_desk_preset() {
    replicates = 30;
    mcmc = McmcConfig::desk();
  }
};

struct ErrorRow {
  std::string scenario; // e.g. "theta_c=10|theta_u=1|rho=0.9"
  Model model;
  int replicate = 0;
  double beta_x_hat = 0.0;
  double error = 0.0;     // beta_x_hat - true beta_x
  double abs_error = 0.0;
  double wall_time_s = 0.0; // kept in memory; not serialized (CSV output is
                            // byte-reproducible)
  std::uint64_t seed = 0;
  bool flagged = false; // fit failure; beta_x_hat/error not meaningful
  std::string note;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
};

ErrorTable run_geostat_study(const GeostatStudyConfig& config);
ErrorTable run_areal_study(const ArealStudyConfig& config);

struct SummaryRow {
  std::string scenario;
  Model model;
  int n = 0;
  int n_flagged = 0;
  // quantiles of |error| (linear interpolation), Tukey whiskers at 1.5 IQR
  double median_abs_error = 0.0;
  double q1_abs_error = 0.0;
  double q3_abs_error = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  double mean_error = 0.0;
  double mc_se = 0.0; // sd(error)/sqrt(n)
};

// Flagged rows are excluded from the statistics and counted. A scenario
// whose rows are all flagged yields a row with n = 0 (empty-summary marker).
std::vector<SummaryRow> summarize_errors(const ErrorTable& table);

// type-7 quantile (linear interpolation between order statistics)
double quantile_linear(std::vector<double> values, double p);

} // namespace spconf

#endif
