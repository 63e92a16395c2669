#include "spconf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "spconf/errors.hpp"
#include "spconf/laplacian.hpp"
#include "spconf/parallel.hpp"

namespace spconf {

void GeostatStudyConfig::validate() const {
  if (n < 10) throw DomainError("GeostatStudyConfig: n must be >= 10");
  if (!(window_hi > window_lo))
    throw DomainError("GeostatStudyConfig: window_hi must exceed window_lo");
  if (theta_c_grid.empty() || theta_u_grid.empty() || rho_grid.empty())
    throw DomainError("GeostatStudyConfig: grids must be nonempty");
  for (const double t : theta_c_grid)
    if (!(t > 0.0)) throw DomainError("GeostatStudyConfig: theta_c must be positive");
  for (const double t : theta_u_grid)
    if (!(t > 0.0)) throw DomainError("GeostatStudyConfig: theta_u must be positive");
  for (const double r : rho_grid)
    if (!(r >= -1.0 && r <= 1.0))
      throw DomainError("GeostatStudyConfig: rho must lie in [-1, 1]");
  if (replicates < 1) throw DomainError("GeostatStudyConfig: replicates must be >= 1");
  if (!(sigma_c2 > 0.0) || !(sigma_u2 >= 0.0) || !(sigma_z2 > 0.0))
    throw DomainError("GeostatStudyConfig: variances out of range");
  coeffs.validate();
  if (models.empty()) throw DomainError("GeostatStudyConfig: model list is empty");
}

void ArealStudyConfig::validate() const {
  if (grid_side < 3) throw DomainError("ArealStudyConfig: grid_side must be >= 3");
  if (replicates < 1) throw DomainError("ArealStudyConfig: replicates must be >= 1");
  if (!(z_sd > 0.0) || !(eps_x_sd > 0.0) || !(eps_sd > 0.0))
    throw DomainError("ArealStudyConfig: standard deviations must be positive");
  mcmc.validate();
  if (models.empty()) throw DomainError("ArealStudyConfig: model list is empty");
}

namespace {

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

ErrorRow make_row(const std::string& scenario, Model model, int replicate,
                  double truth, double beta_hat, double wall_s,
                  std::uint64_t seed) {
  ErrorRow row;
  row.scenario = scenario;
  row.model = model;
  row.replicate = replicate;
  row.beta_x_hat = beta_hat;
  row.error = beta_hat - truth;
  row.abs_error = std::abs(row.error);
  row.wall_time_s = wall_s;
  row.seed = seed;
  return row;
}

ErrorRow make_flagged(const std::string& scenario, Model model, int replicate,
                      std::uint64_t seed, const std::string& note) {
  ErrorRow row;
  row.scenario = scenario;
  row.model = model;
  row.replicate = replicate;
  row.seed = seed;
  row.flagged = true;
  row.note = note;
  return row;
}

} // namespace

ErrorTable run_geostat_study(const GeostatStudyConfig& config) {
  config.validate();
  // locations sampled once and frozen across all cells and replicates
  Rng loc_rng(derive_seed(config.seed, 0xA11CE));
  const Locations locs = Locations::random_uniform(config.n, config.window_lo,
                                                   config.window_hi, loc_rng);
  const bool needs_splines =
      std::any_of(config.models.begin(), config.models.end(), [](Model m) {
        return m == Model::Ps || m == Model::SPlus || m == Model::Gsem;
      });
  std::optional<ThinPlateSpline> tps;
  if (needs_splines) tps.emplace(locs);

  struct Cell {
    double theta_c, theta_u, rho;
    std::string scenario;
  };
  std::vector<Cell> cells;
  for (const double tc : config.theta_c_grid)
    for (const double tu : config.theta_u_grid)
      for (const double rho : config.rho_grid)
        cells.push_back({tc, tu, rho,
                         "theta_c=" + format_param(tc) + "|theta_u=" +
                             format_param(tu) + "|rho=" + format_param(rho)});

  std::vector<std::vector<ErrorRow>> per_cell(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int ci) {
    const Cell& cell = cells[ci];
    ConfoundedFieldSpec spec{config.sigma_c2,
                             config.sigma_u2,
                             config.sigma_z2,
                             cell.rho,
                             CorrelationKernel::exponential(cell.theta_c),
                             CorrelationKernel::exponential(cell.theta_u),
                             0.0,
                             0.0,
                             config.nugget};
    const Eigen::MatrixXd chol_rc =
        cholesky(correlation_matrix(locs, spec.kernel_c, config.nugget),
                 "run_geostat_study: R_c")
            .matrixL();
    const Eigen::MatrixXd chol_ru =
        cholesky(correlation_matrix(locs, spec.kernel_u, config.nugget),
                 "run_geostat_study: R_u")
            .matrixL();

    const std::uint64_t scenario_stream =
        fnv1a(cell.scenario.data(), cell.scenario.size());
    auto& rows = per_cell[ci];
    for (int rep = 0; rep < config.replicates; ++rep) {
      const std::uint64_t data_seed = derive_seed(config.seed, scenario_stream, rep, 0);
      Rng rng(data_seed);
      const auto [x, z] = sample_confounded_fields(spec, chol_rc, chol_ru, rng);
      const Eigen::VectorXd y = generate_response(x, z, config.coeffs, rng);

      for (const Model model : config.models) {
        const auto start = std::chrono::steady_clock::now();
        try {
          FitResult fit;
          switch (model) {
            case Model::Ols: fit = fit_ols(y, x); break;
            case Model::SReml: fit = fit_gls_reml(y, x, locs); break;
            case Model::Ps: fit = fit_spatial_spline(y, x, *tps); break;
            case Model::SPlus: fit = fit_spatial_plus(y, x, *tps); break;
            case Model::Gsem: fit = fit_gsem(y, x, *tps); break;
            default:
              throw DomainError("run_geostat_study: model " + model_tag(model) +
                                " is not part of the geostatistical study");
          }
          const double wall =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count();
          rows.push_back(make_row(cell.scenario, model, rep, config.coeffs.beta_x,
                                  fit.beta_x, wall, data_seed));
        } catch (const std::exception& err) {
          rows.push_back(
              make_flagged(cell.scenario, model, rep, data_seed, err.what()));
        }
      }
    }
  });

  ErrorTable table;
  for (auto& rows : per_cell)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  return table;
}

ErrorTable run_areal_study(const ArealStudyConfig& config) {
  config.validate();
  const auto q = graph_laplacian(rook_adjacency(config.grid_side));
  const Locations centroids = Locations::cell_centroids(config.grid_side);
  const ThinPlateSpline tps(centroids);

  Rng z_rng(derive_seed(config.seed, 0x5EED));
  const Eigen::VectorXd z = areal_z(config.z_mode, q, config.z_sd, z_rng);

  const std::string scenario =
      std::string("z=") +
      (config.z_mode == ArealZMode::Random ? "random" : "eigenvector") +
      "|beta_z=" + format_param(config.beta_z);

  const std::uint64_t scenario_stream = fnv1a(scenario.data(), scenario.size());
  std::vector<std::vector<ErrorRow>> per_rep(config.replicates);
  parallel_for(config.replicates, [&](int rep) {
    const std::uint64_t data_seed = derive_seed(config.seed, scenario_stream, rep, 0);
    Rng rng(data_seed);
    const Eigen::VectorXd x = areal_x_given_z(z, config.eps_x_sd, rng);
    Eigen::VectorXd y(x.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) = config.beta_x * x(i) + config.beta_z * z(i) +
             config.eps_sd * rng.normal();

    auto& rows = per_rep[rep];
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
      const Model model = config.models[mi];
      const std::uint64_t fit_seed =
          derive_seed(config.seed, scenario_stream, rep, mi + 1);
      const auto start = std::chrono::steady_clock::now();
      try {
        FitResult fit;
        if (model == Model::Icar) {
          Rng chain_rng(fit_seed);
          fit = fit_icar_gibbs(y, x, q, config.mcmc, chain_rng).fit;
        } else if (model == Model::BayesOls) {
          Rng chain_rng(fit_seed);
          fit = fit_bayes_ols_gibbs(y, x, config.mcmc, chain_rng).fit;
        } else if (model == Model::Ps) {
          fit = fit_spatial_spline(y, x, tps);
        } else if (model == Model::SPlus) {
          fit = fit_spatial_plus(y, x, tps);
        } else if (model == Model::Gsem) {
          fit = fit_gsem(y, x, tps);
        } else {
          throw DomainError("run_areal_study: model " + model_tag(model) +
                            " is not part of the areal study");
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        rows.push_back(make_row(scenario, model, rep, config.beta_x, fit.beta_x,
                                wall, fit_seed));
      } catch (const std::exception& err) {
        rows.push_back(make_flagged(scenario, model, rep, fit_seed, err.what()));
      }
    }
  });

  ErrorTable table;
  for (auto& rows : per_rep)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  return table;
}

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("quantile_linear: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile_linear: p out of [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) return values[lo];
  return values[lo] + (h - lo) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize_errors(const ErrorTable& table) {
  if (table.rows.empty()) throw DomainError("summarize_errors: empty table");

  // group by (scenario, model), preserving first-appearance order
  std::vector<std::pair<std::string, Model>> keys;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::vector<std::vector<const ErrorRow*>> groups;
  for (const auto& row : table.rows) {
    const auto key = std::make_pair(row.scenario, static_cast<int>(row.model));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      keys.emplace_back(row.scenario, row.model);
      groups.emplace_back();
      it = index.find(key);
    }
    groups[it->second].push_back(&row);
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    SummaryRow s;
    s.scenario = keys[g].first;
    s.model = keys[g].second;
    std::vector<double> abs_errors;
    std::vector<double> errors;
    for (const ErrorRow* row : groups[g]) {
      if (row->flagged) {
        ++s.n_flagged;
        continue;
      }
      abs_errors.push_back(row->abs_error);
      errors.push_back(row->error);
    }
    s.n = static_cast<int>(errors.size());
    if (s.n > 0) {
      s.median_abs_error = quantile_linear(abs_errors, 0.5);
      s.q1_abs_error = quantile_linear(abs_errors, 0.25);
      s.q3_abs_error = quantile_linear(abs_errors, 0.75);
      const double iqr = s.q3_abs_error - s.q1_abs_error;
      const double lo_fence = s.q1_abs_error - 1.5 * iqr;
      const double hi_fence = s.q3_abs_error + 1.5 * iqr;
      double lo = s.q1_abs_error, hi = s.q3_abs_error;
      for (const double v : abs_errors) {
        if (v >= lo_fence) lo = std::min(lo, v);
        if (v <= hi_fence) hi = std::max(hi, v);
      }
      s.whisker_lo = lo;
      s.whisker_hi = hi;
      double mean = 0.0;
      for (const double e : errors) mean += e;
      mean /= s.n;
      s.mean_error = mean;
      if (s.n > 1) {
        double ss = 0.0;
        for (const double e : errors) ss += (e - mean) * (e - mean);
        s.mc_se = std::sqrt(ss / (s.n - 1) / s.n);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace spconf
