#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spconf/datagen.hpp"
#include "spconf/errors.hpp"
#include "spconf/experiments.hpp"
#include "spconf/laplacian.hpp"

using namespace spconf;

namespace {

GeostatStudyConfig smoke_config() {
  GeostatStudyConfig config;
  config.n = 40;
  config.theta_c_grid = {5.0};
  config.theta_u_grid = {5.0};
  config.rho_grid = {0.0};
  config.replicates = 1;
  config.coeffs = {0.3, 3.0, 1.0, 0.0}; // sigma2 = 0
  config.seed = 11;
  return config;
}

} // namespace

TEST_CASE("geostat smoke: one cell, one replicate, all five models finite") {
  const auto table = run_geostat_study(smoke_config());
  REQUIRE(table.rows.size() == 5);
  for (const auto& row : table.rows) {
    CHECK_FALSE(row.flagged);
    CHECK(std::isfinite(row.beta_x_hat));
    CHECK(row.abs_error == std::abs(row.beta_x_hat - 3.0));
  }
}

TEST_CASE("geostat study is deterministic under a fixed seed") {
  auto config = smoke_config();
  config.replicates = 2;
  config.rho_grid = {0.0, 0.6};
  config.coeffs.sigma2 = 0.1;
  const auto a = run_geostat_study(config);
  const auto b = run_geostat_study(config);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].scenario == b.rows[i].scenario);
    CHECK(a.rows[i].model == b.rows[i].model);
    CHECK(a.rows[i].beta_x_hat == b.rows[i].beta_x_hat);
    CHECK(a.rows[i].seed == b.rows[i].seed);
  }
}

TEST_CASE("a single cell re-run in isolation reproduces its rows bit-exactly") {
  GeostatStudyConfig full = smoke_config();
  full.coeffs.sigma2 = 0.1;
  full.theta_c_grid = {1.0, 5.0};
  full.rho_grid = {0.0, 0.9};
  full.replicates = 2;
  full.models = {Model::Ols, Model::Gsem};
  const auto table_full = run_geostat_study(full);

  GeostatStudyConfig sub = full;
  sub.theta_c_grid = {5.0};
  sub.rho_grid = {0.9};
  const auto table_sub = run_geostat_study(sub);

  int matched = 0;
  for (const auto& sub_row : table_sub.rows) {
    for (const auto& full_row : table_full.rows) {
      if (full_row.scenario == sub_row.scenario &&
          full_row.model == sub_row.model &&
          full_row.replicate == sub_row.replicate) {
        CHECK(full_row.beta_x_hat == sub_row.beta_x_hat);
        CHECK(full_row.seed == sub_row.seed);
        ++matched;
      }
    }
  }
  CHECK(matched == static_cast<int>(table_sub.rows.size()));
}

TEST_CASE("areal eigenvector z is almost perfectly correlated with x") {
  const auto q = graph_laplacian(rook_adjacency(11));
  Rng z_rng(5);
  const Eigen::VectorXd z = areal_z(ArealZMode::Eigenvector, q, 0.09, z_rng);
  Rng rng(6);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd x = areal_x_given_z(z, 0.01, rng);
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd zc = z.array() - z.mean();
    const double corr = xc.dot(zc) / (xc.norm() * zc.norm());
    CHECK(corr > 0.95);
  }
}

TEST_CASE("areal study smoke and determinism") {
  ArealStudyConfig config;
  config.z_mode = ArealZMode::Random;
  config.beta_z = 0.0;
  config.replicates = 2;
  config.mcmc = McmcConfig{400, 100, 0.01, 0.01};
  config.seed = 21;
  const auto a = run_areal_study(config);
  REQUIRE(a.rows.size() == 10); // 2 replicates x 5 models
  for (const auto& row : a.rows) {
    CHECK_FALSE(row.flagged);
    CHECK(std::isfinite(row.beta_x_hat));
  }
  const auto b = run_areal_study(config);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].beta_x_hat == b.rows[i].beta_x_hat);
}

TEST_CASE("quantile with linear interpolation matches a sort-based oracle") {
  Rng rng(31);
  std::vector<double> values(37);
  for (auto& v : values) v = rng.normal();

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (const double p : {0.0, 0.25, 0.5, 0.61, 0.75, 1.0}) {
    const double h = (sorted.size() - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const double want =
        (lo + 1 < sorted.size())
            ? sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo])
            : sorted[lo];
    CHECK(quantile_linear(values, p) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("summarize_errors basics") {
  ErrorTable table;
  ErrorRow row;
  row.scenario = "s";
  row.model = Model::Ols;
  row.replicate = 0;
  row.beta_x_hat = 3.4;
  row.error = 0.4;
  row.abs_error = 0.4;
  table.rows.push_back(row);

  const auto summary = summarize_errors(table);
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].n == 1);
  CHECK(summary[0].median_abs_error == 0.4);
  CHECK(summary[0].mean_error == 0.4);

  // symmetric +-e errors
  ErrorTable sym;
  for (const double e : {0.25, -0.25}) {
    ErrorRow r;
    r.scenario = "s";
    r.model = Model::Ols;
    r.error = e;
    r.abs_error = std::abs(e);
    sym.rows.push_back(r);
  }
  const auto s2 = summarize_errors(sym);
  CHECK(s2[0].mean_error == 0.0);
  CHECK(s2[0].median_abs_error == 0.25);
}

TEST_CASE("summarize_errors excludes flagged rows and marks empty groups") {
  ErrorTable table;
  for (int i = 0; i < 4; ++i) {
    ErrorRow r;
    r.scenario = "a";
    r.model = Model::Ols;
    r.replicate = i;
    r.error = 0.1 * (i + 1);
    r.abs_error = std::abs(r.error);
    r.flagged = (i == 3);
    table.rows.push_back(r);
  }
  ErrorRow dead;
  dead.scenario = "b";
  dead.model = Model::Gsem;
  dead.flagged = true;
  table.rows.push_back(dead);

  const auto summary = summarize_errors(table);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].n == 3);
  CHECK(summary[0].n_flagged == 1);
  CHECK(summary[0].median_abs_error == doctest::Approx(0.2));
  CHECK(summary[1].n == 0); // empty-summary marker
  CHECK(summary[1].n_flagged == 1);
}

TEST_CASE("summary quantiles match a sorted recomputation on study output") {
  auto config = smoke_config();
  config.coeffs.sigma2 = 0.1;
  config.replicates = 12;
  config.models = {Model::Ols, Model::Gsem};
  const auto table = run_geostat_study(config);
  const auto summary = summarize_errors(table);
  for (const auto& s : summary) {
    std::vector<double> abs_errors;
    for (const auto& row : table.rows)
      if (row.scenario == s.scenario && row.model == s.model && !row.flagged)
        abs_errors.push_back(row.abs_error);
    CHECK(s.n == static_cast<int>(abs_errors.size()));
    CHECK(s.median_abs_error ==
          doctest::Approx(quantile_linear(abs_errors, 0.5)).epsilon(1e-12));
    // whiskers stay inside the data range and bracket the quartiles
    CHECK(s.whisker_lo <= s.q1_abs_error);
    CHECK(s.whisker_hi >= s.q3_abs_error);
    CHECK(s.whisker_lo >= *std::min_element(abs_errors.begin(), abs_errors.end()) - 1e-15);
    CHECK(s.whisker_hi <= *std::max_element(abs_errors.begin(), abs_errors.end()) + 1e-15);
  }
}

TEST_CASE("config validation") {
  auto config = smoke_config();
  config.rho_grid = {1.5};
  CHECK_THROWS_AS(run_geostat_study(config), DomainError);
  ArealStudyConfig areal;
  areal.mcmc.burn_in = areal.mcmc.iterations;
  CHECK_THROWS_AS(run_areal_study(areal), DomainError);
}
