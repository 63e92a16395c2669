#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "spconf/datagen.hpp"
#include "spconf/errors.hpp"
#include "spconf/estimators.hpp"
#include "spconf/rng.hpp"

using namespace spconf;

namespace {

Eigen::VectorXd random_vector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

Locations random_locs(int n, unsigned seed, double hi = 10.0) {
  Rng rng(seed);
  return Locations::random_uniform(n, 0.0, hi, rng);
}

Eigen::VectorXd gp_draw(const Locations& locs, double theta, double var,
                        Rng& rng) {
  const auto r =
      correlation_matrix(locs, CorrelationKernel::exponential(theta), 1e-8);
  const Eigen::MatrixXd l = cholesky(r, "gp_draw").matrixL();
  return std::sqrt(var) * (l * random_vector(locs.size(), rng));
}

} // namespace

TEST_CASE("fit_ols exact recovery and orthogonality") {
  Rng rng(1);
  const Eigen::VectorXd x = random_vector(30, rng);
  const Eigen::VectorXd y = (0.3 + 3.0 * x.array()).matrix();
  const auto fit = fit_ols(y, x);
  CHECK(std::abs(fit.beta_x - 3.0) < 1e-10);
  CHECK(std::abs(*fit.beta0 - 0.3) < 1e-10);

  const Eigen::VectorXd noisy = y + random_vector(30, rng);
  const auto fit2 = fit_ols(noisy, x);
  const Eigen::VectorXd resid =
      noisy - Eigen::VectorXd::Constant(30, *fit2.beta0) - fit2.beta_x * x;
  CHECK(std::abs(resid.sum()) < 1e-9);
  CHECK(std::abs(resid.dot(x)) < 1e-9);
}

TEST_CASE("fit_ols matches the explicit normal-equations solve") {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd x = random_vector(25, rng);
    const Eigen::VectorXd y = random_vector(25, rng);
    Eigen::MatrixXd design(25, 2);
    design.col(0).setOnes();
    design.col(1) = x;
    const Eigen::Vector2d beta =
        (design.transpose() * design).inverse() * design.transpose() * y;
    const auto fit = fit_ols(y, x);
    CHECK(fit.beta_x == doctest::Approx(beta(1)).epsilon(1e-10));
    CHECK(*fit.beta0 == doctest::Approx(beta(0)).epsilon(1e-10));
  }
}

TEST_CASE("fit_ols rejects a constant regressor") {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 2.5);
  Rng rng(3);
  const Eigen::VectorXd y = random_vector(10, rng);
  CHECK_THROWS_AS(fit_ols(y, x), RankError);
}

TEST_CASE("fit_gls_known with identity equals fit_ols to 1e-12") {
  Rng rng(4);
  const auto identity = PrecisionMetric::identity(50);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::VectorXd x = random_vector(50, rng);
    const Eigen::VectorXd y = random_vector(50, rng);
    const auto ols = fit_ols(y, x);
    const auto gls = fit_gls_known(y, x, identity);
    CHECK(std::abs(ols.beta_x - gls.beta_x) < 1e-12);
  }
}

TEST_CASE("fit_gls_known recovers exact affine data under any metric") {
  Rng rng(5);
  const PrecisionMetric m{test::random_spd(20, 0.3, 4.0, 6)};
  const Eigen::VectorXd x = random_vector(20, rng);
  const Eigen::VectorXd y = (1.5 - 2.0 * x.array()).matrix();
  const auto fit = fit_gls_known(y, x, m);
  CHECK(std::abs(fit.beta_x + 2.0) < 1e-10);
  CHECK(std::abs(*fit.beta0 - 1.5) < 1e-10);
}

TEST_CASE("fit_gls_known matches the whitened-OLS oracle") {
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 30;
    const PrecisionMetric m{test::random_spd(n, 0.2, 5.0, 70 + rep)};
    const Eigen::VectorXd x = random_vector(n, rng);
    const Eigen::VectorXd y = random_vector(n, rng);

    // whiten with the Cholesky factor of the precision and run OLS
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(m.matrix()).matrixL();
    Eigen::MatrixXd design(n, 2);
    design.col(0).setOnes();
    design.col(1) = x;
    const Eigen::MatrixXd wd = l.transpose() * design;
    const Eigen::VectorXd wy = l.transpose() * y;
    const Eigen::Vector2d beta = wd.householderQr().solve(wy);

    const auto fit = fit_gls_known(y, x, m);
    CHECK(fit.beta_x == doctest::Approx(beta(1)).epsilon(1e-9));
    CHECK(*fit.beta0 == doctest::Approx(beta(0)).epsilon(1e-9));
  }
}

TEST_CASE("REML pushes the variance ratio to zero on non-spatial data") {
  const int n = 100;
  const Locations locs = random_locs(n, 8);
  Rng rng(9);
  int small_ratio = 0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    const Eigen::VectorXd x = random_vector(n, rng);
    const Eigen::VectorXd y =
        (0.3 + 2.0 * x.array()).matrix() + random_vector(n, rng);
    const auto fit = fit_gls_reml(y, x, locs);
    const double ratio = *fit.sigma_s2 / (*fit.sigma_s2 + *fit.sigma_eps2);
    if (ratio < 0.2) ++small_ratio;
  }
  CHECK(small_ratio >= 45); // >= 90%
}

TEST_CASE("REML beats OLS under strong spatial residual structure") {
  const int n = 100;
  const Locations locs = random_locs(n, 10);
  Rng rng(11);
  int reml_wins = 0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    const Eigen::VectorXd x = gp_draw(locs, 3.0, 1.0, rng);
    const Eigen::VectorXd g = gp_draw(locs, 2.0, 1.0, rng); // sigma_s^2 = 1
    const Eigen::VectorXd y = (0.3 + 2.0 * x.array() + g.array()).matrix() +
                              std::sqrt(0.1) * random_vector(n, rng);
    const auto reml = fit_gls_reml(y, x, locs);
    const auto ols = fit_ols(y, x);
    if (std::abs(reml.beta_x - 2.0) < std::abs(ols.beta_x - 2.0)) ++reml_wins;
  }
  CHECK(reml_wins >= 35); // >= 70%
}

TEST_CASE("REML optimum beats random parameter probes") {
  const int n = 60;
  const Locations locs = random_locs(n, 12);
  Rng rng(13);
  const Eigen::VectorXd x = gp_draw(locs, 2.0, 1.0, rng);
  const Eigen::VectorXd g = gp_draw(locs, 4.0, 0.5, rng);
  const Eigen::VectorXd y = (0.3 + 2.0 * x.array() + g.array()).matrix() +
                            0.3 * random_vector(n, rng);
  const auto fit = fit_gls_reml(y, x, locs);
  const double at_opt =
      reml_objective(y, x, locs, *fit.theta, *fit.sigma_s2 / *fit.sigma_eps2);
  for (int probe = 0; probe < 20; ++probe) {
    const double theta = std::exp(rng.uniform(std::log(0.05), std::log(30.0)));
    const double v = rng.uniform(0.01, 0.99);
    CHECK(at_opt <= reml_objective(y, x, locs, theta, v / (1.0 - v)) + 1e-7);
  }
}

TEST_CASE("fit_gls_reml input validation") {
  Rng rng(14);
  const Locations locs = random_locs(8, 15);
  const Eigen::VectorXd x = random_vector(8, rng);
  const Eigen::VectorXd y = random_vector(8, rng);
  CHECK_THROWS_AS(fit_gls_reml(y, x, locs), DomainError); // n < 10
}

TEST_CASE("fit_spatial_spline recovers exact affine-in-x data") {
  const Locations locs = random_locs(40, 16);
  Rng rng(17);
  const Eigen::VectorXd x = random_vector(40, rng);
  const Eigen::VectorXd y = (0.3 + 3.0 * x.array()).matrix();
  const auto fit = fit_spatial_spline(y, x, locs);
  CHECK(std::abs(fit.beta_x - 3.0) < 1e-6);
}

TEST_CASE("fit_spatial_spline at huge lambda equals OLS on x and coordinates") {
  const Locations locs = random_locs(35, 18);
  Rng rng(19);
  const Eigen::VectorXd x = random_vector(35, rng);
  const Eigen::VectorXd y =
      (0.5 + 1.7 * x.array()).matrix() + 0.4 * random_vector(35, rng);

  const auto fit = fit_spatial_spline(y, x, locs, 1e12);

  Eigen::MatrixXd design(35, 4);
  design.col(0).setOnes();
  design.col(1) = locs.points().col(0);
  design.col(2) = locs.points().col(1);
  design.col(3) = x;
  const Eigen::Vector4d beta = design.householderQr().solve(y);
  CHECK(fit.beta_x == doctest::Approx(beta(3)).epsilon(1e-5));
}

TEST_CASE("fit_spatial_spline matches a backfitting oracle at fixed lambda") {
  const int n = 40;
  const Locations locs = random_locs(n, 20);
  const ThinPlateSpline tps(locs);
  Rng rng(21);
  const Eigen::VectorXd x = gp_draw(locs, 2.0, 1.0, rng);
  const Eigen::VectorXd g = gp_draw(locs, 3.0, 0.5, rng);
  const Eigen::VectorXd y =
      (0.3 + 2.0 * x.array() + g.array()).matrix() + 0.3 * random_vector(n, rng);
  const double lambda = tps.lambda_grid()[20];

  const auto joint = fit_spatial_spline(y, x, tps, lambda);

  const Eigen::MatrixXd s = tps.hat(lambda);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  double b0 = 0.0, bx = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    const auto linear = fit_ols(y - f, x);
    const double change = std::abs(linear.beta_x - bx);
    b0 = *linear.beta0;
    bx = linear.beta_x;
    f = s * (y - Eigen::VectorXd::Constant(n, b0) - bx * x);
    if (iter > 3 && change < 1e-13) break;
  }
  CHECK(bx == doctest::Approx(joint.beta_x).epsilon(1e-6));
}

TEST_CASE("fit_spatial_spline rejects x affine in the coordinates") {
  const Locations locs = random_locs(25, 22);
  const Eigen::VectorXd x =
      (0.7 * locs.points().col(0).array() - 0.1 * locs.points().col(1).array() + 2.0)
          .matrix();
  Rng rng(23);
  const Eigen::VectorXd y = random_vector(25, rng);
  CHECK_THROWS_AS(fit_spatial_spline(y, x, locs), RankError);
}

TEST_CASE("fit_spatial_plus with a zero step-1 smoother equals fit_spatial_spline") {
  const Locations locs = random_locs(30, 24);
  const ThinPlateSpline tps(locs);
  Rng rng(25);
  const Eigen::VectorXd x = gp_draw(locs, 2.0, 1.0, rng);
  const Eigen::VectorXd y =
      (3.0 * x.array()).matrix() + 0.5 * random_vector(30, rng);
  const auto direct = fit_spatial_spline(y, x, tps);
  const auto splus = fit_spatial_plus_with(y, x, tps, zero_smoother(30));
  CHECK(splus.beta_x == direct.beta_x);
}

TEST_CASE("fit_spatial_plus rejects x affine in the coordinates") {
  const Locations locs = random_locs(25, 26);
  const Eigen::VectorXd x =
      (1.0 + 0.5 * locs.points().col(0).array()).matrix();
  Rng rng(27);
  const Eigen::VectorXd y = random_vector(25, rng);
  CHECK_THROWS_AS(fit_spatial_plus(y, x, locs), RankError);
}

TEST_CASE("gSEM with zero smoothers equals the OLS slope") {
  Rng rng(28);
  const Eigen::VectorXd x = random_vector(30, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const auto gsem = fit_gsem_with(y, x, zero_smoother(30), zero_smoother(30));
  const auto ols = fit_ols(y, x);
  CHECK(gsem.beta_x == doctest::Approx(ols.beta_x).epsilon(1e-12));
}

TEST_CASE("gSEM with centering smoothers equals the OLS slope") {
  Rng rng(29);
  const Eigen::VectorXd x = random_vector(30, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const auto centering = gls_intercept_smoother(PrecisionMetric::identity(30));
  const auto gsem = fit_gsem_with(y, x, centering, centering);
  const auto ols = fit_ols(y, x);
  CHECK(gsem.beta_x == doctest::Approx(ols.beta_x).epsilon(1e-10));
}

TEST_CASE("gSEM equals residualize + OLS composed independently") {
  const Locations locs = random_locs(30, 30);
  const ThinPlateSpline tps(locs);
  Rng rng(31);
  const Eigen::VectorXd x = gp_draw(locs, 2.0, 1.0, rng);
  const Eigen::VectorXd y = gp_draw(locs, 1.0, 1.0, rng);
  const auto sx = thin_plate_smoother_gcv(tps, x);
  const auto sy = thin_plate_smoother_gcv(tps, y);
  const auto gsem = fit_gsem_with(y, x, sx, sy);
  const auto composed = fit_ols(residualize(y, sy), residualize(x, sx));
  CHECK(gsem.beta_x == doctest::Approx(composed.beta_x).epsilon(1e-12));
}

TEST_CASE("gSEM slope is invariant to constant shifts") {
  const Locations locs = random_locs(35, 32);
  const ThinPlateSpline tps(locs);
  Rng rng(33);
  const Eigen::VectorXd x = gp_draw(locs, 2.0, 1.0, rng);
  const Eigen::VectorXd y =
      (2.0 * x.array()).matrix() + gp_draw(locs, 3.0, 0.4, rng);
  const auto base = fit_gsem(y, x, tps);
  const auto shifted = fit_gsem(
      (y.array() + 11.0).matrix(), (x.array() - 4.0).matrix(), tps);
  CHECK(shifted.beta_x == doctest::Approx(base.beta_x).epsilon(1e-8));
}

TEST_CASE("permutation invariance of the deterministic pipelines") {
  const int n = 60;
  const Locations locs = random_locs(n, 34);
  Rng rng(35);
  const Eigen::VectorXd x = gp_draw(locs, 3.0, 1.0, rng);
  const Eigen::VectorXd g = gp_draw(locs, 2.0, 0.5, rng);
  const Eigen::VectorXd y =
      (0.3 + 2.0 * x.array() + g.array()).matrix() + 0.2 * random_vector(n, rng);

  // a fixed permutation
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = (7 * i + 3) % n;
  Eigen::VectorXd xp(n), yp(n);
  Eigen::MatrixX2d pts(n, 2);
  for (int i = 0; i < n; ++i) {
    xp(i) = x(perm[i]);
    yp(i) = y(perm[i]);
    pts.row(i) = locs.points().row(perm[i]);
  }
  const Locations locs_p{pts};

  CHECK(std::abs(fit_ols(y, x).beta_x - fit_ols(yp, xp).beta_x) < 1e-8);
  CHECK(std::abs(fit_spatial_spline(y, x, locs).beta_x -
                 fit_spatial_spline(yp, xp, locs_p).beta_x) < 1e-8);
  CHECK(std::abs(fit_spatial_plus(y, x, locs).beta_x -
                 fit_spatial_plus(yp, xp, locs_p).beta_x) < 1e-8);
  CHECK(std::abs(fit_gsem(y, x, locs).beta_x - fit_gsem(yp, xp, locs_p).beta_x) <
        1e-8);
  CHECK(std::abs(fit_gls_reml(y, x, locs).beta_x -
                 fit_gls_reml(yp, xp, locs_p).beta_x) < 1e-8);
}
