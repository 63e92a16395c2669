#ifndef SPCONF_ESTIMATORS_HPP
#define SPCONF_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "spconf/kernels.hpp"
#include "spconf/metric.hpp"
#include "spconf/smoothers.hpp"

namespace spconf {

enum class Model { Ols, GlsKnown, SReml, Ps, SPlus, Gsem, Icar, BayesOls };

std::string model_tag(Model m);
Model model_from_tag(const std::string& tag);

struct ConvergenceInfo {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

struct FitResult {
  Model model;
  double beta_x = 0.0;
  std::optional<double> beta0;
  // REML covariance parameters
  std::optional<double> theta;
  std::optional<double> sigma_s2;
  std::optional<double> sigma_eps2;
  // smoothing parameters used by the spline pipelines
  std::optional<double> lambda_fit;
  std::optional<double> lambda_x;
  std::optional<double> lambda_y;
  std::optional<ConvergenceInfo> convergence;
};

// Least squares for y = beta0 + beta_x x + eps.
FitResult fit_ols(const Eigen::VectorXd& y, const Eigen::VectorXd& x);

// Generalized least squares with known precision:
// (beta0, beta_x) = (X*' M X*)^{-1} X*' M y with X* = [1 x].
FitResult fit_gls_known(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                        const PrecisionMetric& m);

struct RemlOptions {
  int multistarts = 3;
  int max_iterations = 400;
  double f_tolerance = 1e-11;
};

// y = beta0 + beta_x x + g + eps with Cov(g) = sigma_s^2 exp(-d/theta) and
// Cov(eps) = sigma_eps^2 I. Profiles the restricted likelihood over
// (log theta, logit of sigma_s^2/(sigma_s^2+sigma_eps^2)) with bounded
// Nelder-Mead and multistart probes; returns the GLS coefficients at the
// optimum.
FitResult fit_gls_reml(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                       const Locations& locs, const RemlOptions& opts = {});

// evaluates the profiled REML objective at (theta, ratio) -- exposed for
// optimality spot checks
double reml_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                      const Locations& locs, double theta, double ratio);

// Partial-linear fit y = beta0 + beta_x x + f(s) + eps with f a penalized
// thin-plate term; the spline design is augmented with the linear column x
// and only the spline block is penalized. lambda by GCV unless fixed.
FitResult fit_spatial_spline(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                             const ThinPlateSpline& tps,
                             std::optional<double> lambda = std::nullopt);
FitResult fit_spatial_spline(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                             const Locations& locs,
                             std::optional<double> lambda = std::nullopt);

// Step 1: r_x = residuals of the thin-plate smoother applied to x.
// Step 2: fit_spatial_spline(y, r_x).
FitResult fit_spatial_plus(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const ThinPlateSpline& tps);
FitResult fit_spatial_plus(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Locations& locs);
// Variant with a caller-chosen step-1 smoother.
FitResult fit_spatial_plus_with(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                const ThinPlateSpline& tps,
                                const LinearSmoother& step1);

// r_x, r_y from thin-plate smoothers on x and y; beta_x from the OLS fit of
// r_y on r_x with intercept.
FitResult fit_gsem(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                   const ThinPlateSpline& tps);
FitResult fit_gsem(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                   const Locations& locs);
FitResult fit_gsem_with(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                        const LinearSmoother& smoother_x,
                        const LinearSmoother& smoother_y);

} // namespace spconf

#endif
