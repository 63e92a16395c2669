#include "spconf/estimators.hpp"

#include <cmath>
#include <limits>

#include "spconf/errors.hpp"
#include "spconf/optim.hpp"

namespace spconf {

std::string model_tag(Model m) {
  switch (m) {
    case Model::Ols: return "OLS";
    case Model::GlsKnown: return "GLS";
    case Model::SReml: return "S-REML";
    case Model::Ps: return "PS";
    case Model::SPlus: return "S+";
    case Model::Gsem: return "gSEM";
    case Model::Icar: return "ICAR";
    case Model::BayesOls: return "BayesOLS";
  }
  throw DomainError("model_tag: unknown model");
}

Model model_from_tag(const std::string& tag) {
  if (tag == "OLS") return Model::Ols;
  if (tag == "GLS") return Model::GlsKnown;
  if (tag == "S-REML") return Model::SReml;
  if (tag == "PS") return Model::Ps;
  if (tag == "S+") return Model::SPlus;
  if (tag == "gSEM") return Model::Gsem;
  if (tag == "ICAR") return Model::Icar;
  if (tag == "BayesOLS") return Model::BayesOls;
  throw DomainError("model_from_tag: unknown tag '" + tag + "'");
}

namespace {

void check_lengths(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
  if (y.size() != x.size())
    throw DomainError("fit: y and x lengths differ");
  if (y.size() < 3) throw DomainError("fit: need at least 3 observations");
}

// rank check for the [1 x] design under the given inner products
void check_not_constant(double n11, double nxx, double n1x) {
  const double det = n11 * nxx - n1x * n1x;
  if (!(det > 1e-12 * std::max(n11 * nxx, 1e-300)))
    throw RankError("fit: regressor is constant (degenerate design)");
}

} // namespace

FitResult fit_ols(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
  check_lengths(y, x);
  const auto n = x.size();
  check_not_constant(static_cast<double>(n), x.squaredNorm(), x.sum());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = x;
  const Eigen::Vector2d beta = design.householderQr().solve(y);
  FitResult out;
  out.model = Model::Ols;
  out.beta0 = beta(0);
  out.beta_x = beta(1);
  return out;
}

FitResult fit_gls_known(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                        const PrecisionMetric& m) {
  check_lengths(y, x);
  if (m.size() != x.size())
    throw DomainError("fit_gls_known: metric dimension mismatch");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(x.size());
  const Eigen::VectorXd m1 = m.matrix() * ones;
  const Eigen::VectorXd mx = m.matrix() * x;
  const double n11 = ones.dot(m1);
  const double nxx = x.dot(mx);
  const double n1x = ones.dot(mx);
  check_not_constant(n11, nxx, n1x);
  const double g1y = m1.dot(y);
  const double gxy = mx.dot(y);
  const double det = n11 * nxx - n1x * n1x;
  FitResult out;
  out.model = Model::GlsKnown;
  out.beta0 = (nxx * g1y - n1x * gxy) / det;
  out.beta_x = (n11 * gxy - n1x * g1y) / det;
  return out;
}

namespace {

struct RemlWorkspace {
  Eigen::MatrixXd dist;
  Eigen::MatrixXd design; // [1 x]
  Eigen::VectorXd y;
  int n;
};

// -2 restricted log likelihood, dropping constants, profiled over beta and
// the residual variance. ratio = sigma_s^2 / sigma_eps^2.
double reml_neg2(const RemlWorkspace& ws, double theta, double ratio) {
  const int n = ws.n;
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i) {
    v(i, i) = 1.0 + ratio;
    for (int j = i + 1; j < n; ++j)
      v(i, j) = v(j, i) = ratio * std::exp(-ws.dist(i, j) / theta);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() != Eigen::Success)
    return std::numeric_limits<double>::infinity();
  double logdet_v = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < n; ++i) logdet_v += 2.0 * std::log(l(i, i));

  const Eigen::MatrixXd vx = llt.solve(ws.design);
  const Eigen::VectorXd vy = llt.solve(ws.y);
  const Eigen::Matrix2d xtvx = ws.design.transpose() * vx;
  const Eigen::Vector2d xtvy = ws.design.transpose() * vy;
  const double det_small = xtvx(0, 0) * xtvx(1, 1) - xtvx(0, 1) * xtvx(1, 0);
  if (!(det_small > 0.0)) return std::numeric_limits<double>::infinity();
  const Eigen::Vector2d beta = xtvx.ldlt().solve(xtvy);
  const Eigen::VectorXd resid = ws.y - ws.design * beta;
  const double quad = resid.dot(llt.solve(resid));
  if (!(quad > 0.0)) return std::numeric_limits<double>::infinity();
  return (n - 2) * std::log(quad) + logdet_v + std::log(det_small);
}

} // namespace

double reml_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                      const Locations& locs, double theta, double ratio) {
  RemlWorkspace ws{locs.distance_matrix(), Eigen::MatrixXd(y.size(), 2), y,
                   static_cast<int>(y.size())};
  ws.design.col(0).setOnes();
  ws.design.col(1) = x;
  return reml_neg2(ws, theta, ratio);
}

FitResult fit_gls_reml(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                       const Locations& locs, const RemlOptions& opts) {
  check_lengths(y, x);
  if (y.size() < 10) throw DomainError("fit_gls_reml: need at least 10 observations");
  if (x.size() != locs.size())
    throw DomainError("fit_gls_reml: x length != number of locations");
  check_not_constant(static_cast<double>(x.size()), x.squaredNorm(), x.sum());

  RemlWorkspace ws{locs.distance_matrix(), Eigen::MatrixXd(y.size(), 2), y,
                   static_cast<int>(y.size())};
  ws.design.col(0).setOnes();
  ws.design.col(1) = x;

  // range identifiable only between the point spacing and the window size;
  // beyond either end the ratio-vs-range profile is flat and the optimizer
  // would chase noise
  double diameter = 0.0;
  std::vector<double> nearest(ws.n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < ws.n; ++i)
    for (int j = 0; j < ws.n; ++j) {
      if (i == j) continue;
      diameter = std::max(diameter, ws.dist(i, j));
      nearest[i] = std::min(nearest[i], ws.dist(i, j));
    }
  std::nth_element(nearest.begin(), nearest.begin() + ws.n / 2, nearest.end());
  const double theta_lo = std::max(2.0 * nearest[ws.n / 2], 1e-8 * diameter);
  const double theta_hi = 0.5 * diameter;

  // parameters: u = (log theta, logit v) with v = sigma_s^2/(sigma_s^2+sigma_eps^2)
  auto objective = [&](const Eigen::VectorXd& u) {
    const double theta = std::exp(u(0));
    const double v = 1.0 / (1.0 + std::exp(-u(1)));
    const double ratio = v / (1.0 - v);
    return reml_neg2(ws, theta, ratio);
  };

  Eigen::VectorXd lower(2), upper(2);
  lower << std::log(theta_lo), -16.0;
  upper << std::log(theta_hi), 16.0;

  const double theta_starts[3] = {1.5 * theta_lo, std::sqrt(theta_lo * theta_hi),
                                  0.8 * theta_hi};
  const double v_starts[3] = {0.2, 0.5, 0.9};

  NelderMeadOptions nm_opts;
  nm_opts.max_iterations = opts.max_iterations;
  nm_opts.f_tolerance = opts.f_tolerance;

  bool any_converged = false;
  double best_f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u(2);
  int total_iter = 0;
  for (int s = 0; s < opts.multistarts; ++s) {
    Eigen::VectorXd start(2);
    start << std::log(theta_starts[s % 3]),
        std::log(v_starts[s % 3] / (1.0 - v_starts[s % 3]));
    const auto res = nelder_mead(objective, start, lower, upper, nm_opts);
    total_iter += res.iterations;
    any_converged = any_converged || res.converged;
    if (res.f < best_f) {
      best_f = res.f;
      best_u = res.x;
    }
  }
  if (!std::isfinite(best_f))
    throw ConvergenceError("fit_gls_reml: objective not finite at any probe", best_f);
  if (!any_converged)
    throw ConvergenceError(
        "fit_gls_reml: no restart met tolerance; best objective " +
            std::to_string(best_f),
        best_f);

  const double theta = std::exp(best_u(0));
  const double v = 1.0 / (1.0 + std::exp(-best_u(1)));
  const double ratio = v / (1.0 - v);

  // GLS at the optimum
  Eigen::MatrixXd vm(ws.n, ws.n);
  for (int i = 0; i < ws.n; ++i) {
    vm(i, i) = 1.0 + ratio;
    for (int j = i + 1; j < ws.n; ++j)
      vm(i, j) = vm(j, i) = ratio * std::exp(-ws.dist(i, j) / theta);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(vm);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("fit_gls_reml: V not positive definite at optimum");
  const Eigen::MatrixXd vx = llt.solve(ws.design);
  const Eigen::Matrix2d xtvx = ws.design.transpose() * vx;
  const Eigen::Vector2d beta =
      xtvx.ldlt().solve(ws.design.transpose() * llt.solve(ws.y));
  const Eigen::VectorXd resid = ws.y - ws.design * beta;
  const double sigma_eps2 = resid.dot(llt.solve(resid)) / (ws.n - 2);

  FitResult out;
  out.model = Model::SReml;
  out.beta0 = beta(0);
  out.beta_x = beta(1);
  out.theta = theta;
  out.sigma_eps2 = sigma_eps2;
  out.sigma_s2 = ratio * sigma_eps2;
  out.convergence = ConvergenceInfo{total_iter, any_converged, best_f};
  return out;
}

namespace {

struct SplineSystem {
  Eigen::MatrixXd u;  // [T x], n x 4
  Eigen::MatrixXd b;  // E Q2, n x (n-3)
  Eigen::MatrixXd g0; // W'W with W = [U B]
  Eigen::VectorXd wy; // W'y
  int n = 0;
  int p = 0; // n + 1 columns total
};

SplineSystem build_spline_system(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                 const ThinPlateSpline& tps) {
  const int n = tps.size();
  SplineSystem sys;
  sys.n = n;
  sys.p = n + 1;
  sys.u.resize(n, 4);
  sys.u.leftCols(3) = tps.affine();
  sys.u.col(3) = x;

  // reject x that is (numerically) affine in the coordinates
  const Eigen::VectorXd x_proj =
      tps.affine() * tps.affine().householderQr().solve(x);
  if ((x - x_proj).norm() <= 1e-8 * std::max(x.norm(), 1.0))
    throw RankError("fit_spatial_spline: regressor is affine in the coordinates");

  sys.b = tps.radial() * tps.null_complement();
  Eigen::MatrixXd w(n, sys.p);
  w.leftCols(4) = sys.u;
  w.rightCols(n - 3) = sys.b;
  sys.g0 = w.transpose() * w;
  sys.wy = w.transpose() * y;
  return sys;
}

struct SplineSolve {
  Eigen::VectorXd coef;
  double edf;
  double rss;
};

SplineSolve solve_spline(const SplineSystem& sys, const ThinPlateSpline& tps,
                         const Eigen::VectorXd& y, double lambda) {
  Eigen::MatrixXd g = sys.g0;
  g.bottomRightCorner(sys.n - 3, sys.n - 3) += lambda * tps.penalty();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success)
    throw ConditioningError("fit_spatial_spline: penalized system is singular");
  SplineSolve out;
  out.coef = ldlt.solve(sys.wy);
  const Eigen::VectorXd fitted =
      sys.u * out.coef.head(4) + sys.b * out.coef.tail(sys.n - 3);
  out.rss = (y - fitted).squaredNorm();
  // edf = tr(G^{-1} W'W) = p - lambda tr(G^{-1} P)
  Eigen::MatrixXd p_block = Eigen::MatrixXd::Zero(sys.p, sys.n - 3);
  p_block.bottomRows(sys.n - 3) = tps.penalty();
  const Eigen::MatrixXd solved = ldlt.solve(p_block);
  out.edf = sys.p - lambda * solved.bottomRows(sys.n - 3).trace();
  return out;
}

} // namespace

FitResult fit_spatial_spline(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                             const ThinPlateSpline& tps,
                             std::optional<double> lambda) {
  check_lengths(y, x);
  if (y.size() != tps.size())
    throw DomainError("fit_spatial_spline: dimension mismatch with locations");
  const SplineSystem sys = build_spline_system(y, x, tps);

  double chosen;
  if (lambda) {
    if (!(*lambda > 0.0))
      throw DomainError("fit_spatial_spline: lambda must be positive");
    chosen = *lambda;
  } else {
    double best_score = std::numeric_limits<double>::infinity();
    chosen = tps.lambda_grid().front();
    for (const double cand : tps.lambda_grid()) {
      const SplineSolve sol = solve_spline(sys, tps, y, cand);
      // require a residual degree of freedom; the augmented basis can
      // interpolate at the bottom of the grid
      const double denom = sys.n - sol.edf;
      if (denom < 1.0) continue;
      const double score = sys.n * sol.rss / (denom * denom);
      if (score < best_score) {
        best_score = score;
        chosen = cand;
      }
    }
  }

  const SplineSolve sol = solve_spline(sys, tps, y, chosen);
  FitResult out;
  out.model = Model::Ps;
  out.beta0 = sol.coef(0);
  out.beta_x = sol.coef(3);
  out.lambda_fit = chosen;
  return out;
}

FitResult fit_spatial_spline(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                             const Locations& locs, std::optional<double> lambda) {
  return fit_spatial_spline(y, x, ThinPlateSpline(locs), lambda);
}

FitResult fit_spatial_plus_with(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                const ThinPlateSpline& tps,
                                const LinearSmoother& step1) {
  const Eigen::VectorXd r_x = residualize(x, step1);
  FitResult out = fit_spatial_spline(y, r_x, tps);
  out.model = Model::SPlus;
  out.lambda_x = step1.lambda;
  return out;
}

FitResult fit_spatial_plus(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const ThinPlateSpline& tps) {
  return fit_spatial_plus_with(y, x, tps, thin_plate_smoother_gcv(tps, x));
}

FitResult fit_spatial_plus(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Locations& locs) {
  return fit_spatial_plus(y, x, ThinPlateSpline(locs));
}

FitResult fit_gsem_with(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                        const LinearSmoother& smoother_x,
                        const LinearSmoother& smoother_y) {
  const Eigen::VectorXd r_x = residualize(x, smoother_x);
  const Eigen::VectorXd r_y = residualize(y, smoother_y);
  FitResult ols = fit_ols(r_y, r_x);
  FitResult out;
  out.model = Model::Gsem;
  out.beta_x = ols.beta_x;
  out.beta0 = ols.beta0;
  out.lambda_x = smoother_x.lambda;
  out.lambda_y = smoother_y.lambda;
  return out;
}

FitResult fit_gsem(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                   const ThinPlateSpline& tps) {
  return fit_gsem_with(y, x, thin_plate_smoother_gcv(tps, x),
                       thin_plate_smoother_gcv(tps, y));
}

FitResult fit_gsem(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                   const Locations& locs) {
  return fit_gsem(y, x, ThinPlateSpline(locs));
}

} // namespace spconf
