#include "spconf/kernels.hpp"

#include <cmath>

#include "spconf/bessel.hpp"
#include "spconf/errors.hpp"

namespace spconf {

Locations::Locations(Eigen::MatrixX2d points) : points_(std::move(points)) {
  if (points_.rows() < 2)
    throw DomainError("Locations: need at least 2 points");
  if (!points_.allFinite())
    throw DomainError("Locations: coordinates must be finite");
}

Locations Locations::random_uniform(int n, double lo, double hi, Rng& rng) {
  Eigen::MatrixX2d pts(n, 2);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = rng.uniform(lo, hi);
    pts(i, 1) = rng.uniform(lo, hi);
  }
  return Locations(std::move(pts));
}

Locations Locations::lattice(int side, double lo, double hi) {
  if (side < 2) throw DomainError("Locations::lattice: side must be >= 2");
  Eigen::MatrixX2d pts(side * side, 2);
  const double step = (hi - lo) / (side - 1);
  int k = 0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j, ++k) {
      pts(k, 0) = lo + step * i;
      pts(k, 1) = lo + step * j;
    }
  return Locations(std::move(pts));
}

Locations Locations::cell_centroids(int side) {
  if (side < 2) throw DomainError("Locations::cell_centroids: side must be >= 2");
  Eigen::MatrixX2d pts(side * side, 2);
  int k = 0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j, ++k) {
      pts(k, 0) = (i + 0.5) / side;
      pts(k, 1) = (j + 0.5) / side;
    }
  return Locations(std::move(pts));
}

Eigen::MatrixXd Locations::distance_matrix() const {
  const int n = size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = distance(i, j);
  }
  return d;
}

double matern_correlation(double d, double theta, double nu) {
  if (!std::isfinite(d) || d < 0.0)
    throw DomainError("matern_correlation: distance must be finite and >= 0");
  if (!std::isfinite(theta) || theta <= 0.0)
    throw DomainError("matern_correlation: range theta must be positive");
  if (!std::isfinite(nu) || nu <= 0.0)
    throw DomainError("matern_correlation: smoothness nu must be positive");
  if (d == 0.0) return 1.0;
  double x = 2.0 * std::sqrt(nu) * d / theta;
  // below this the double-precision value is 1 to within ~1e-12 for nu >= 1/2,
  // and the Temme route risks overflow in exp(|mu| log(2/x))
  if (x < 1e-250) x = 1e-250;
  const double scale = std::exp2(nu - 1.0) * std::tgamma(nu);
  return std::pow(x, nu) * bessel_k(nu, x) / scale;
}

double exponential_correlation(double d, double theta) {
  if (!std::isfinite(d) || d < 0.0)
    throw DomainError("exponential_correlation: distance must be finite and >= 0");
  if (!std::isfinite(theta) || theta <= 0.0)
    throw DomainError("exponential_correlation: range theta must be positive");
  return std::exp(-d / theta);
}

CorrelationKernel CorrelationKernel::matern(double theta, double nu) {
  if (!std::isfinite(theta) || theta <= 0.0)
    throw DomainError("CorrelationKernel: range theta must be positive");
  if (!std::isfinite(nu) || nu <= 0.0)
    throw DomainError("CorrelationKernel: smoothness nu must be positive");
  return CorrelationKernel{Family::Matern, theta, nu};
}

CorrelationKernel CorrelationKernel::exponential(double theta) {
  if (!std::isfinite(theta) || theta <= 0.0)
    throw DomainError("CorrelationKernel: range theta must be positive");
  return CorrelationKernel{Family::Exponential, theta, 0.0};
}

double CorrelationKernel::operator()(double d) const {
  return family == Family::Matern ? matern_correlation(d, theta, nu)
                                  : exponential_correlation(d, theta);
}

std::string CorrelationKernel::describe() const {
  return family == Family::Matern
             ? "matern(theta=" + std::to_string(theta) + ",nu=" + std::to_string(nu) + ")"
             : "exponential(theta=" + std::to_string(theta) + ")";
}

Eigen::MatrixXd correlation_matrix(const Locations& locs,
                                   const CorrelationKernel& kernel,
                                   double nugget) {
  if (!(nugget >= 0.0))
    throw DomainError("correlation_matrix: nugget must be >= 0");
  const int n = locs.size();
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i) {
    r(i, i) = 1.0 + nugget;
    for (int j = i + 1; j < n; ++j)
      r(i, j) = r(j, i) = kernel(locs.distance(i, j));
  }
  return r;
}

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& m,
                                     const std::string& context) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    const double lambda_min =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    throw ConditioningError(context + ": Cholesky failed, smallest eigenvalue " +
                            std::to_string(lambda_min));
  }
  return llt;
}

} // namespace spconf
