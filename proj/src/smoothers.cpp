#include "spconf/smoothers.hpp"

#include <cmath>
#include <limits>

#include "spconf/errors.hpp"

namespace spconf {
namespace {

double tps_eta(double r) { return r > 0.0 ? r * r * std::log(r) : 0.0; }

} // namespace

ThinPlateSpline::ThinPlateSpline(const Locations& locs)
    : locs_(locs), n_(locs.size()) {
  if (n_ < 4)
    throw DomainError("ThinPlateSpline: need at least 4 locations");

  t_.resize(n_, 3);
  t_.col(0).setOnes();
  t_.col(1) = locs_.points().col(0);
  t_.col(2) = locs_.points().col(1);

  e_.resize(n_, n_);
  for (int i = 0; i < n_; ++i) {
    e_(i, i) = 0.0;
    for (int j = i + 1; j < n_; ++j)
      e_(i, j) = e_(j, i) = tps_eta(locs_.distance(i, j));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(t_);
  if (rank_check.rank() < 3)
    throw ConditioningError("ThinPlateSpline: locations are collinear");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(t_);
  const Eigen::MatrixXd q = qr.householderQ();
  q1_ = q.leftCols(3);
  q2_ = q.rightCols(n_ - 3);

  a_ = q2_.transpose() * e_ * q2_;
  a_ = 0.5 * (a_ + a_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_);
  if (es.info() != Eigen::Success)
    throw ConditioningError("ThinPlateSpline: penalty eigendecomposition failed");
  evec_ = es.eigenvectors();
  eval_ = es.eigenvalues().cwiseMax(0.0);

  // 40-point log-spaced grid anchored on the mean penalty eigenvalue
  const double scale = std::max(eval_.mean(), 1e-300);
  grid_.resize(40);
  for (int i = 0; i < 40; ++i)
    grid_[i] = scale * std::pow(10.0, -8.0 + 12.0 * i / 39.0);
}

Eigen::MatrixXd ThinPlateSpline::hat(double lambda) const {
  if (!(lambda >= 0.0))
    throw DomainError("ThinPlateSpline::hat: lambda must be >= 0");
  Eigen::VectorXd ratio(eval_.size());
  for (Eigen::Index i = 0; i < eval_.size(); ++i) {
    const double denom = eval_(i) + lambda;
    ratio(i) = denom > 0.0 ? eval_(i) / denom : 0.0;
  }
  const Eigen::MatrixXd q2v = q2_ * evec_;
  return q1_ * q1_.transpose() + q2v * ratio.asDiagonal() * q2v.transpose();
}

double ThinPlateSpline::edf(double lambda) const {
  double tr = 3.0;
  for (Eigen::Index i = 0; i < eval_.size(); ++i) {
    const double denom = eval_(i) + lambda;
    if (denom > 0.0) tr += eval_(i) / denom;
  }
  return tr;
}

double ThinPlateSpline::gcv_score(const Eigen::VectorXd& target,
                                  double lambda) const {
  if (target.size() != n_)
    throw DomainError("ThinPlateSpline::gcv_score: dimension mismatch");
  const Eigen::VectorXd w = evec_.transpose() * (q2_.transpose() * target);
  double rss = 0.0;
  double tr_residual = 0.0;
  for (Eigen::Index i = 0; i < eval_.size(); ++i) {
    const double denom = eval_(i) + lambda;
    const double shrink = denom > 0.0 ? lambda / denom : 1.0;
    rss += shrink * shrink * w(i) * w(i);
    tr_residual += shrink;
  }
  // a candidate needs at least one residual degree of freedom; the
  // full-rank basis can interpolate outright at tiny lambda and GCV
  // degenerates to 0/0 there
  if (tr_residual < 1.0) return std::numeric_limits<double>::infinity();
  return n_ * rss / (tr_residual * tr_residual);
}

double ThinPlateSpline::select_lambda(const Eigen::VectorXd& target) const {
  double best = grid_.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (const double lambda : grid_) {
    const double score = gcv_score(target, lambda);
    if (score < best_score) {
      best_score = score;
      best = lambda;
    }
  }
  return best;
}

LinearSmoother thin_plate_smoother(const Locations& locs, double lambda) {
  const ThinPlateSpline tps(locs);
  return LinearSmoother{tps.hat(lambda), lambda, "thin-plate"};
}

LinearSmoother thin_plate_smoother_gcv(const ThinPlateSpline& tps,
                                       const Eigen::VectorXd& target) {
  const double lambda = tps.select_lambda(target);
  return LinearSmoother{tps.hat(lambda), lambda, "thin-plate (GCV)"};
}

LinearSmoother thin_plate_smoother_gcv(const Locations& locs,
                                       const Eigen::VectorXd& target) {
  return thin_plate_smoother_gcv(ThinPlateSpline(locs), target);
}

LinearSmoother gls_intercept_smoother(const PrecisionMetric& m) {
  const int n = m.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd m_ones = m.matrix() * ones;
  const double denom = ones.dot(m_ones);
  return LinearSmoother{(ones * m_ones.transpose()) / denom, std::nullopt,
                        "gls-intercept"};
}

LinearSmoother zero_smoother(int n) {
  return LinearSmoother{Eigen::MatrixXd::Zero(n, n), std::nullopt, "zero"};
}

Eigen::VectorXd residualize(const Eigen::VectorXd& v, const LinearSmoother& s) {
  if (v.size() != s.hat.rows())
    throw DomainError("residualize: dimension mismatch");
  return v - s.hat * v;
}

} // namespace spconf
