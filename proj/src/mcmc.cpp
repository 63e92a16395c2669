#include "spconf/mcmc.hpp"

#include <cmath>
#include <numeric>

#include "spconf/errors.hpp"

namespace spconf {

void McmcConfig::validate() const {
  if (iterations <= 0) throw DomainError("McmcConfig: iterations must be > 0");
  if (burn_in < 0 || burn_in >= iterations)
    throw DomainError("McmcConfig: burn_in must lie in [0, iterations)");
  if (!(prior_shape > 0.0) || !(prior_rate > 0.0))
    throw DomainError("McmcConfig: prior shape and rate must be > 0");
}

double sequential_sum(const Eigen::VectorXd& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i);
  return s;
}

void recenter_sum_to_zero(Eigen::VectorXd& v) {
  const auto n = v.size();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean += v(i);
  mean /= static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) -= mean;
  double head = 0.0;
  for (Eigen::Index i = 0; i < n - 1; ++i) head += v(i);
  v(n - 1) = -head;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_finite(double draw, const char* name, long iteration) {
  if (!std::isfinite(draw))
    throw SamplerError(std::string("Gibbs sampler: non-finite draw for ") + name +
                           " at iteration " + std::to_string(iteration),
                       iteration);
}

} // namespace

GibbsResult fit_icar_gibbs(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Eigen::SparseMatrix<double>& q,
                           const McmcConfig& config, Rng& rng) {
  config.validate();
  const auto n = y.size();
  if (x.size() != n || q.rows() != n || q.cols() != n)
    throw DomainError("fit_icar_gibbs: dimension mismatch");
  const double xtx = x.squaredNorm();
  if (!(xtx > 0.0)) throw RankError("fit_icar_gibbs: x is identically zero");

  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();

  // pattern of tau^2 Q + I/sigma^2 is fixed; analyze once
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol;
  {
    Eigen::SparseMatrix<double> pattern = q + identity;
    chol.analyzePattern(pattern);
  }

  double beta_x = 0.0;
  double sigma2 = 1.0;
  double tau2 = 1.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd eta(n), u(n);

  MCMCChain chain;
  chain.iterations = config.iterations;
  chain.burn_in = config.burn_in;
  chain.beta_x.reserve(config.retained());
  chain.sigma2.reserve(config.retained());
  chain.tau2.reserve(config.retained());

  for (long it = 0; it < config.iterations; ++it) {
    // beta_x | .
    const double mean_beta = x.dot(y - w) / xtx;
    beta_x = mean_beta + std::sqrt(sigma2 / xtx) * rng.normal();
    check_finite(beta_x, "beta_x", it);

    // w | . : precision P = tau^2 Q + I/sigma^2, mean P^{-1}(y - beta_x x)/sigma^2
    Eigen::SparseMatrix<double> prec = tau2 * q;
    prec += (1.0 / sigma2) * identity;
    chol.factorize(prec);
    if (chol.info() != Eigen::Success)
      throw SamplerError("fit_icar_gibbs: sparse Cholesky failed", it);
    const Eigen::VectorXd rhs = (y - beta_x * x) / sigma2;
    const Eigen::VectorXd mean_w = chol.solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) eta(i) = rng.normal();
    // P = L L' => w = mean + L^{-T} eta has covariance P^{-1}
    u = chol.permutationPinv() *
        static_cast<Eigen::VectorXd>(
            chol.matrixU().solve(static_cast<Eigen::VectorXd>(eta)));
    w = mean_w + u;
    recenter_sum_to_zero(w);
    const double w_sum = sequential_sum(w);
    chain.max_abs_w_sum = std::max(chain.max_abs_w_sum, std::abs(w_sum));

    // sigma^2 | .
    const double rss = (y - beta_x * x - w).squaredNorm();
    sigma2 = rng.inv_gamma(config.prior_shape + 0.5 * n,
                           config.prior_rate + 0.5 * rss);
    check_finite(sigma2, "sigma2", it);

    // tau^2 | . : Q has rank n-1, hence the (n-1)/2 shape
    const double wqw = w.dot(q * w);
    tau2 = rng.inv_gamma(config.prior_shape + 0.5 * (n - 1),
                         config.prior_rate + 0.5 * wqw);
    check_finite(tau2, "tau2", it);

    if (it >= config.burn_in) {
      chain.beta_x.push_back(beta_x);
      chain.sigma2.push_back(sigma2);
      chain.tau2.push_back(tau2);
    }
  }

  GibbsResult out;
  out.fit.model = Model::Icar;
  out.fit.beta_x = mean_of(chain.beta_x);
  out.chain = std::move(chain);
  return out;
}

GibbsResult fit_bayes_ols_gibbs(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                const McmcConfig& config, Rng& rng) {
  config.validate();
  const auto n = y.size();
  if (x.size() != n) throw DomainError("fit_bayes_ols_gibbs: dimension mismatch");

  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = x;
  const Eigen::Matrix2d xtx = design.transpose() * design;
  const double det = xtx(0, 0) * xtx(1, 1) - xtx(0, 1) * xtx(1, 0);
  if (!(det > 1e-12 * std::max(xtx(0, 0) * xtx(1, 1), 1e-300)))
    throw RankError("fit_bayes_ols_gibbs: regressor is constant");
  const Eigen::Vector2d beta_hat = xtx.ldlt().solve(design.transpose() * y);
  const Eigen::Matrix2d xtx_inv = xtx.inverse();
  const Eigen::LLT<Eigen::Matrix2d> cov_chol(xtx_inv);

  double sigma2 = 1.0;
  Eigen::Vector2d beta = beta_hat;

  MCMCChain chain;
  chain.iterations = config.iterations;
  chain.burn_in = config.burn_in;
  chain.beta_x.reserve(config.retained());
  chain.sigma2.reserve(config.retained());

  std::vector<double> beta0_draws;
  beta0_draws.reserve(config.retained());

  for (long it = 0; it < config.iterations; ++it) {
    // beta | sigma^2 ~ N(beta_hat, sigma^2 (X'X)^{-1})
    const Eigen::Vector2d eta(rng.normal(), rng.normal());
    const Eigen::Vector2d step = cov_chol.matrixL() * eta;
    beta = beta_hat + std::sqrt(sigma2) * step;
    check_finite(beta(1), "beta_x", it);

    const double rss = (y - design * beta).squaredNorm();
    sigma2 = rng.inv_gamma(config.prior_shape + 0.5 * n,
                           config.prior_rate + 0.5 * rss);
    check_finite(sigma2, "sigma2", it);

    if (it >= config.burn_in) {
      chain.beta_x.push_back(beta(1));
      chain.sigma2.push_back(sigma2);
      beta0_draws.push_back(beta(0));
    }
  }

  GibbsResult out;
  out.fit.model = Model::BayesOls;
  out.fit.beta_x = mean_of(chain.beta_x);
  out.fit.beta0 = mean_of(beta0_draws);
  out.chain = std::move(chain);
  return out;
}

} // namespace spconf
