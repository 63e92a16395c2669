#ifndef SPCONF_METRIC_HPP
#define SPCONF_METRIC_HPP

#include <Eigen/Dense>

namespace spconf {

// Symmetric positive-definite precision matrix defining an inner product
// <a,b> = a' M b on R^n. Validated on construction.
class PrecisionMetric {
public:
  explicit PrecisionMetric(Eigen::MatrixXd m);
  static PrecisionMetric identity(int n);

  int size() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }

private:
  Eigen::MatrixXd m_;
};

double precision_inner_product(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const PrecisionMetric& m);
double precision_norm(const Eigen::VectorXd& a, const PrecisionMetric& m);
// arccos of the normalized inner product, cosine clamped to [-1, 1].
double precision_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const PrecisionMetric& m);

// U D U' with eigenvalues sorted descending, columns of U orthonormal.
struct SpectralDecomposition {
  Eigen::MatrixXd u;
  Eigen::VectorXd d;

  static SpectralDecomposition compute(const Eigen::MatrixXd& m);
  static SpectralDecomposition compute(const PrecisionMetric& m);
};

// Euclidean angle between v and each eigenvector column, in [0, pi].
Eigen::VectorXd eigen_angles(const Eigen::VectorXd& v,
                             const SpectralDecomposition& decomp);

} // namespace spconf

#endif
