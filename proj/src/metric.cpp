#include "spconf/metric.hpp"

#include <algorithm>
#include <cmath>

#include "spconf/errors.hpp"

namespace spconf {

PrecisionMetric::PrecisionMetric(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw DomainError("PrecisionMetric: matrix must be square");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300))
    throw DomainError("PrecisionMetric: matrix is not symmetric");
  m_ = 0.5 * (m_ + m_.transpose().eval());
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("PrecisionMetric: matrix is not positive definite");
}

PrecisionMetric PrecisionMetric::identity(int n) {
  return PrecisionMetric(Eigen::MatrixXd::Identity(n, n));
}

double precision_inner_product(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const PrecisionMetric& m) {
  if (a.size() != m.size() || b.size() != m.size())
    throw DomainError("precision_inner_product: dimension mismatch");
  return a.dot(m.matrix() * b);
}

double precision_norm(const Eigen::VectorXd& a, const PrecisionMetric& m) {
  return std::sqrt(precision_inner_product(a, a, m));
}

double precision_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const PrecisionMetric& m) {
  const double na = precision_norm(a, m);
  const double nb = precision_norm(b, m);
  if (na == 0.0 || nb == 0.0)
    throw DomainError("precision_angle: zero vector");
  const double c = precision_inner_product(a, b, m) / (na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

SpectralDecomposition SpectralDecomposition::compute(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw ConditioningError("SpectralDecomposition: eigendecomposition failed");
  const auto n = m.rows();
  SpectralDecomposition out;
  out.u.resize(n, n);
  out.d.resize(n);
  // Eigen sorts ascending; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.d(i) = es.eigenvalues()(n - 1 - i);
    out.u.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

SpectralDecomposition SpectralDecomposition::compute(const PrecisionMetric& m) {
  return compute(m.matrix());
}

Eigen::VectorXd eigen_angles(const Eigen::VectorXd& v,
                             const SpectralDecomposition& decomp) {
  const double nv = v.norm();
  if (nv == 0.0) throw DomainError("eigen_angles: zero vector");
  if (v.size() != decomp.u.rows())
    throw DomainError("eigen_angles: dimension mismatch");
  Eigen::VectorXd angles(decomp.u.cols());
  for (Eigen::Index i = 0; i < decomp.u.cols(); ++i) {
    const double c = decomp.u.col(i).dot(v) / (nv * decomp.u.col(i).norm());
    angles(i) = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return angles;
}

} // namespace spconf
