#ifndef SPCONF_SMOOTHERS_HPP
#define SPCONF_SMOOTHERS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spconf/kernels.hpp"
#include "spconf/metric.hpp"

namespace spconf {

// A linear map from a response vector to fitted values. The residual maker
// (I - hat) annihilates whatever space the smoother reproduces exactly (the
// affine functions of the coordinates for the thin-plate smoother, constants
// for the intercept smoother).
struct LinearSmoother {
  Eigen::MatrixXd hat;
  std::optional<double> lambda;
  std::string basis;
};

// Full-rank 2D thin-plate basis centered at the locations: radial part
// eta(r) = r^2 log r plus the unpenalized affine part {1, s1, s2}. The
// penalized solution for smoothing parameter lambda is
//   min ||y - E c - T a||^2 + lambda c' E c   subject to  T' c = 0,
// solved through the QR split T = [Q1 Q2] [R; 0] and the eigendecomposition
// of A = Q2' E Q2, so hats and GCV scores are cheap per lambda.
class ThinPlateSpline {
public:
  explicit ThinPlateSpline(const Locations& locs);

  int size() const { return n_; }
  Eigen::MatrixXd hat(double lambda) const;
  // effective degrees of freedom, trace of hat(lambda)
  double edf(double lambda) const;
  double gcv_score(const Eigen::VectorXd& target, double lambda) const;
  // grid argmin of the GCV score
  double select_lambda(const Eigen::VectorXd& target) const;
  const std::vector<double>& lambda_grid() const { return grid_; }

  const Locations& locations() const { return locs_; }
  const Eigen::MatrixXd& affine() const { return t_; }           // n x 3
  const Eigen::MatrixXd& radial() const { return e_; }           // n x n
  const Eigen::MatrixXd& null_complement() const { return q2_; } // n x (n-3)
  const Eigen::MatrixXd& penalty() const { return a_; }          // Q2' E Q2

private:
  Locations locs_;
  int n_;
  Eigen::MatrixXd t_, e_, q1_, q2_, a_;
  Eigen::MatrixXd evec_;  // eigenvectors of A
  Eigen::VectorXd eval_;  // eigenvalues of A, clamped at 0
  std::vector<double> grid_;
};

LinearSmoother thin_plate_smoother(const Locations& locs, double lambda);
LinearSmoother thin_plate_smoother_gcv(const ThinPlateSpline& tps,
                                       const Eigen::VectorXd& target);
LinearSmoother thin_plate_smoother_gcv(const Locations& locs,
                                       const Eigen::VectorXd& target);

// S = 1 (1' M 1)^{-1} 1' M: the hat matrix of a GLS fit with only an
// intercept. Residuals are x - alpha 1 with alpha = <x,1>_M / ||1||_M^2.
LinearSmoother gls_intercept_smoother(const PrecisionMetric& m);

LinearSmoother zero_smoother(int n);

// (I - S) v
Eigen::VectorXd residualize(const Eigen::VectorXd& v, const LinearSmoother& s);

} // namespace spconf

#endif
