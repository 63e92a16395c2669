#include "spconf/surface.hpp"

#include <cmath>

#include "spconf/bias.hpp"
#include "spconf/errors.hpp"
#include "spconf/parallel.hpp"
#include "spconf/rng.hpp"

namespace spconf {

void SurfaceSpec::validate() const {
  if (!(nu > 0.0)) throw DomainError("SurfaceSpec: nu must be > 0");
  if (theta_c_grid.empty() || theta_u_grid.empty())
    throw DomainError("SurfaceSpec: theta grids must be nonempty");
  for (const double t : theta_c_grid)
    if (!(t > 0.0)) throw DomainError("SurfaceSpec: theta_c grid must be positive");
  for (const double t : theta_u_grid)
    if (!(t > 0.0)) throw DomainError("SurfaceSpec: theta_u grid must be positive");
  if (!(p_c > 0.0 && p_c < 1.0))
    throw DomainError("SurfaceSpec: p_c must lie in (0, 1)");
  if (!(p_z > 0.0 && p_z < 1.0))
    throw DomainError("SurfaceSpec: p_z must lie in (0, 1)");
  if (grid_side < 2) throw DomainError("SurfaceSpec: grid_side must be >= 2");
  if (replicates < 1) throw DomainError("SurfaceSpec: replicates must be >= 1");
  if (!(nugget >= 0.0)) throw DomainError("SurfaceSpec: nugget must be >= 0");
}

std::vector<double> SurfaceSpec::default_theta_grid() {
  std::vector<double> grid(10);
  for (int i = 0; i < 10; ++i) grid[i] = 0.1 * (i + 1);
  return grid;
}

namespace {

struct CellAccumulator {
  double sum_s = 0.0, sumsq_s = 0.0;
  double sum_ns = 0.0, sumsq_ns = 0.0;
  int n = 0;

  void add(double cs, double cns) {
    sum_s += cs;
    sumsq_s += cs * cs;
    sum_ns += cns;
    sumsq_ns += cns * cns;
    ++n;
  }
};

// second element of a GLS/OLS coefficient of v on [1 x]
double second_coef_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                        const Eigen::LLT<Eigen::MatrixXd>* sigma_chol) {
  const auto n = x.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w1 = ones, wx = x, wv = v;
  if (sigma_chol) {
    w1 = sigma_chol->solve(ones);
    wx = sigma_chol->solve(x);
    wv = v; // products below pair the solved vectors with raw ones
  }
  const double n11 = ones.dot(w1);
  const double nxx = x.dot(wx);
  const double n1x = ones.dot(wx);
  const double det = n11 * nxx - n1x * n1x;
  if (!(det > 0.0) || !std::isfinite(det))
    throw RankError("c_surface: degenerate design");
  const double g1v = w1.dot(wv);
  const double gxv = wx.dot(wv);
  return (n11 * gxv - n1x * g1v) / det;
}

} // namespace

SurfaceResult c_surface(const SurfaceSpec& spec) {
  spec.validate();
  const Locations locs = Locations::lattice(spec.grid_side, 0.0, 1.0);
  const int n = locs.size();

  // correlation matrices depend only on one theta each; build them once
  std::vector<Eigen::MatrixXd> rc_by_theta, ru_by_theta;
  rc_by_theta.reserve(spec.theta_c_grid.size());
  for (const double t : spec.theta_c_grid)
    rc_by_theta.push_back(
        correlation_matrix(locs, CorrelationKernel::matern(t, spec.nu), spec.nugget));
  ru_by_theta.reserve(spec.theta_u_grid.size());
  for (const double t : spec.theta_u_grid)
    ru_by_theta.push_back(
        correlation_matrix(locs, CorrelationKernel::matern(t, spec.nu), spec.nugget));

  const double sigma_c2 = spec.p_c;
  const double sigma_u2 = 1.0 - spec.p_c;
  const double sigma2 = (1.0 - spec.p_z) / spec.p_z; // beta_z = sigma_z = 1

  const int n_cells = static_cast<int>(spec.theta_c_grid.size() *
                                       spec.theta_u_grid.size());
  SurfaceResult out;
  out.spec = spec;
  out.cells.resize(n_cells);

  parallel_for(n_cells, [&](int cell) {
    const int ic = cell / static_cast<int>(spec.theta_u_grid.size());
    const int iu = cell % static_cast<int>(spec.theta_u_grid.size());
    SurfaceCell& result = out.cells[cell];
    result.theta_c = spec.theta_c_grid[ic];
    result.theta_u = spec.theta_u_grid[iu];

    CellAccumulator acc;
    try {
      const Eigen::MatrixXd& r_c = rc_by_theta[ic];
      const Eigen::MatrixXd& r_u = ru_by_theta[iu];
      const Eigen::MatrixXd k = compute_K(spec.p_c, r_u, r_c);
      Eigen::MatrixXd sigma = r_c; // beta_z^2 sigma_z^2 = 1
      sigma.diagonal().array() += sigma2;
      Eigen::LLT<Eigen::MatrixXd> sigma_chol(sigma);
      if (sigma_chol.info() != Eigen::Success)
        throw ConditioningError("c_surface: Sigma not positive definite");
      const Eigen::MatrixXd cov_x = sigma_c2 * r_c + sigma_u2 * r_u;
      const Eigen::MatrixXd chol_x =
          cholesky(cov_x, "c_surface: Cov(X)").matrixL();

      for (int rep = 0; rep < spec.replicates; ++rep) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(cell), rep));
        Eigen::VectorXd eta(n);
        for (int i = 0; i < n; ++i) eta(i) = rng.normal();
        const Eigen::VectorXd x = chol_x.triangularView<Eigen::Lower>() * eta;
        const Eigen::VectorXd kx = k * x; // mu_x = 0
        const double c_s = second_coef_cell(x, kx, &sigma_chol);
        const double c_ns = second_coef_cell(x, kx, nullptr);
        acc.add(c_s, c_ns);
      }
    } catch (const std::exception&) {
      // conditioning failures are recorded per cell, never fatal
    }

    result.n_fail = spec.replicates - acc.n;
    if (acc.n > 0) {
      result.c_s_mean = acc.sum_s / acc.n;
      result.c_ns_mean = acc.sum_ns / acc.n;
      if (acc.n > 1) {
        const double var_s =
            (acc.sumsq_s - acc.sum_s * acc.sum_s / acc.n) / (acc.n - 1);
        const double var_ns =
            (acc.sumsq_ns - acc.sum_ns * acc.sum_ns / acc.n) / (acc.n - 1);
        result.c_s_mcse = std::sqrt(std::max(var_s, 0.0) / acc.n);
        result.c_ns_mcse = std::sqrt(std::max(var_ns, 0.0) / acc.n);
      }
    }
  });

  return out;
}

} // namespace spconf
