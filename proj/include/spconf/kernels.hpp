#ifndef SPCONF_KERNELS_HPP
#define SPCONF_KERNELS_HPP

#include <Eigen/Dense>
#include <string>

#include "spconf/rng.hpp"

namespace spconf {

// Ordered set of n planar coordinates. Duplicate points are allowed but any
// covariance assembled from them is singular unless the consumer adds a
// nugget.
class Locations {
public:
  explicit Locations(Eigen::MatrixX2d points);

  static Locations random_uniform(int n, double lo, double hi, Rng& rng);
  // side x side lattice with endpoints included, spanning [lo, hi]^2.
  static Locations lattice(int side, double lo, double hi);
  // centroids of the cells of a side x side partition of the unit square.
  static Locations cell_centroids(int side);

  int size() const { return static_cast<int>(points_.rows()); }
  const Eigen::MatrixX2d& points() const { return points_; }
  double distance(int i, int j) const {
    return (points_.row(i) - points_.row(j)).norm();
  }
  Eigen::MatrixXd distance_matrix() const;

private:
  Eigen::MatrixX2d points_;
};

// C(d; theta, nu) = (1/(Gamma(nu) 2^{nu-1})) (2 sqrt(nu) d / theta)^nu
//                   K_nu(2 sqrt(nu) d / theta)
// Exactly 1 at d = 0.
double matern_correlation(double d, double theta, double nu);

// exp(-d/theta). Note this is not the nu=1/2 member of the class above,
// which is exp(-sqrt(2) d / theta); the two kernels are kept distinct.
double exponential_correlation(double d, double theta);

struct CorrelationKernel {
  enum class Family { Matern, Exponential };

  static CorrelationKernel matern(double theta, double nu);
  static CorrelationKernel exponential(double theta);

  double operator()(double d) const;
  std::string describe() const;

  Family family;
  double theta;
  double nu; // Matern only
};

// Entry (i,j) = kernel(|s_i - s_j|) + nugget * 1{i=j}. Exactly symmetric by
// construction; diagonal is 1 + nugget.
Eigen::MatrixXd correlation_matrix(const Locations& locs,
                                   const CorrelationKernel& kernel,
                                   double nugget = 0.0);

// Cholesky factor of a symmetric positive-definite matrix. On failure throws
// ConditioningError naming the smallest eigenvalue.
Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& m,
                                     const std::string& context);

} // namespace spconf

#endif
