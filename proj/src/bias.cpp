#include "spconf/bias.hpp"

#include <cmath>

#include "spconf/errors.hpp"

namespace spconf {
namespace {

constexpr double kZeroTol = 1e-12;

// ratio with the 0/0 = 0 convention; mixed degenerate cases are errors
double guarded_ratio(double num, double den, const char* what) {
  if (std::abs(den) < kZeroTol) {
    if (std::abs(num) < kZeroTol) return 0.0;
    throw RankError(std::string(what) +
                    ": denominator is degenerate with nonzero numerator");
  }
  return num / den;
}

// second element of (X*' W X*)^{-1} X*' W v for X* = [1 x]; W optional
double second_coef(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                   const Eigen::MatrixXd* w) {
  const auto n = x.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w1 = w ? Eigen::VectorXd(*w * ones) : ones;
  Eigen::VectorXd wx = w ? Eigen::VectorXd(*w * x) : x;
  const double n11 = ones.dot(w1);
  const double nxx = x.dot(wx);
  const double n1x = ones.dot(wx);
  const double det = n11 * nxx - n1x * n1x;
  if (!(det > kZeroTol * std::max(n11 * nxx, 1e-300)))
    throw RankError("bias: design [1 x] is rank deficient");
  const double g1v = w1.dot(v);
  const double gxv = wx.dot(v);
  return (n11 * gxv - n1x * g1v) / det;
}

} // namespace

Eigen::MatrixXd compute_K(double p_c, const Eigen::MatrixXd& r_u,
                          const Eigen::MatrixXd& r_c) {
  if (!(p_c > 0.0 && p_c <= 1.0))
    throw DomainError("compute_K: p_c must lie in (0, 1]");
  const auto n = r_c.rows();
  if (r_u.rows() != n || r_u.cols() != n || r_c.cols() != n)
    throw DomainError("compute_K: dimension mismatch");
  if (p_c == 1.0) return Eigen::MatrixXd::Identity(n, n);
  // the definition divides by R_c, so reject singular R_c even though the
  // factored form below would tolerate it
  if (Eigen::LLT<Eigen::MatrixXd>(r_c).info() != Eigen::Success)
    throw ConditioningError("compute_K: R_c is not positive definite");
  // p_c R_c (p_c R_c + (1-p_c) R_u)^{-1}, via one SPD solve of the mix
  const Eigen::MatrixXd mix = p_c * r_c + (1.0 - p_c) * r_u;
  Eigen::LLT<Eigen::MatrixXd> llt(mix);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("compute_K: p_c R_c + (1-p_c) R_u is not positive definite");
  // K' = mix^{-1} (p_c R_c)
  return llt.solve(p_c * r_c).transpose();
}

namespace {

double stochastic_bias(const Eigen::VectorXd& x, const ConfoundedFieldSpec& spec,
                       const Locations& locs, const GeneratingCoefficients& coeffs,
                       bool spatial) {
  spec.validate();
  coeffs.validate();
  if (x.size() != locs.size())
    throw DomainError("stochastic bias: x length != number of locations");
  const auto r_c = correlation_matrix(locs, spec.kernel_c, spec.nugget);
  const auto r_u = correlation_matrix(locs, spec.kernel_u, spec.nugget);
  const Eigen::MatrixXd k = compute_K(spec.p_c(), r_u, r_c);
  const Eigen::VectorXd centered =
      x - Eigen::VectorXd::Constant(x.size(), spec.mu_x);
  const Eigen::VectorXd kx = k * centered;
  const double prefactor =
      coeffs.beta_z * spec.rho * std::sqrt(spec.sigma_z2 / spec.sigma_c2);
  if (!spatial) return prefactor * second_coef(x, kx, nullptr);

  Eigen::MatrixXd sigma =
      coeffs.beta_z * coeffs.beta_z * spec.sigma_z2 * r_c;
  sigma.diagonal().array() += coeffs.sigma2;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("bias_spatial_stochastic: Sigma is not positive definite");
  const Eigen::MatrixXd sigma_inv = llt.solve(Eigen::MatrixXd::Identity(x.size(), x.size()));
  return prefactor * second_coef(x, kx, &sigma_inv);
}

} // namespace

double bias_nonspatial_stochastic(const Eigen::VectorXd& x,
                                  const ConfoundedFieldSpec& spec,
                                  const Locations& locs,
                                  const GeneratingCoefficients& coeffs) {
  return stochastic_bias(x, spec, locs, coeffs, false);
}

double bias_spatial_stochastic(const Eigen::VectorXd& x,
                               const ConfoundedFieldSpec& spec,
                               const Locations& locs,
                               const GeneratingCoefficients& coeffs) {
  return stochastic_bias(x, spec, locs, coeffs, true);
}

namespace {

struct InnerProducts {
  double n11;  // ||1||^2
  double nxx;  // ||x||^2
  double n1x;  // <x,1>
  double nxz;  // <x,z>
  double n1z;  // <z,1>
};

InnerProducts fixed_products(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                             const Eigen::MatrixXd* m) {
  const auto n = x.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd m1 = m ? Eigen::VectorXd(*m * ones) : ones;
  const Eigen::VectorXd mx = m ? Eigen::VectorXd(*m * x) : x;
  InnerProducts p;
  p.n11 = ones.dot(m1);
  p.nxx = x.dot(mx);
  p.n1x = ones.dot(mx);
  p.nxz = z.dot(mx);
  p.n1z = z.dot(m1);
  return p;
}

double fixed_bias(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                  double beta_z, const Eigen::MatrixXd* m) {
  if (x.size() != z.size()) throw DomainError("bias: x and z lengths differ");
  const InnerProducts p = fixed_products(x, z, m);
  const double den = p.n11 * p.nxx - p.n1x * p.n1x;
  if (!(den > kZeroTol * std::max(p.n11 * p.nxx, 1e-300)))
    throw RankError("bias: x is constant under the metric");
  return beta_z * (p.n11 * p.nxz - p.n1x * p.n1z) / den;
}

} // namespace

double bias_ols_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                      double beta_z) {
  return fixed_bias(x, z, beta_z, nullptr);
}

double bias_gls_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                      double beta_z, const PrecisionMetric& m) {
  if (m.size() != x.size()) throw DomainError("bias_gls_fixed: metric dimension mismatch");
  return fixed_bias(x, z, beta_z, &m.matrix());
}

BiasReport bias_spatialplus_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                                  double beta_x, double beta_z,
                                  const LinearSmoother& smoother_x,
                                  const PrecisionMetric& m) {
  if (x.size() != z.size()) throw DomainError("bias_spatialplus_fixed: x and z lengths differ");
  if (m.size() != x.size())
    throw DomainError("bias_spatialplus_fixed: metric dimension mismatch");
  const Eigen::VectorXd r_x = residualize(x, smoother_x);
  const auto n = x.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd m1 = m.matrix() * ones;
  const Eigen::VectorXd mr = m.matrix() * r_x;

  const double n11 = ones.dot(m1);
  const double nrr = r_x.dot(mr);
  const double n1r = ones.dot(mr);
  const double nrx = x.dot(mr);
  const double nrz = z.dot(mr);
  const double n1x = x.dot(m1);
  const double n1z = z.dot(m1);

  const double den = n11 * nrr - n1r * n1r;
  const double num_a = n11 * nrx - n1r * n1x;
  const double num_b = n11 * nrz - n1r * n1z;

  const double a2_star =
      beta_x * (guarded_ratio(num_a, den, "bias_spatialplus_fixed A2") - 1.0);
  const double b2 = beta_z * guarded_ratio(num_b, den, "bias_spatialplus_fixed B2");

  BiasReport out;
  out.model = Model::SPlus;
  out.components = {{"A2_star", a2_star}, {"B2", b2}};
  out.bias = a2_star + b2;
  return out;
}

BiasReport bias_gsem_fixed(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                           double beta_x, double beta_z,
                           const LinearSmoother& smoother_x,
                           const LinearSmoother& smoother_y) {
  if (x.size() != z.size()) throw DomainError("bias_gsem_fixed: x and z lengths differ");
  const Eigen::VectorXd r_x = residualize(x, smoother_x);
  const auto n = x.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  // mixed inner products <a, (I - S_y) b>
  const Eigen::VectorXd tx = residualize(x, smoother_y);
  const Eigen::VectorXd tz = residualize(z, smoother_y);

  const double n11 = static_cast<double>(n);
  const double nrr = r_x.squaredNorm();
  const double n1r = r_x.sum();
  const double den = n11 * nrr - n1r * n1r;
  if (!(den > kZeroTol * std::max(n11 * nrr, 1e-300)))
    throw RankError("bias_gsem_fixed: residualized x is constant");

  const double a2 = beta_x * (n11 * r_x.dot(tx) - n1r * tx.sum()) / den;
  const double b2 = beta_z * (n11 * r_x.dot(tz) - n1r * tz.sum()) / den;

  BiasReport out;
  out.model = Model::Gsem;
  // report A2 - beta_x so the components sum to the total
  out.components = {{"A2_star", a2 - beta_x}, {"B2", b2}};
  out.bias = a2 - beta_x + b2;
  return out;
}

} // namespace spconf
