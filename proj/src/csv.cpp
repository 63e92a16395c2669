#include "spconf/csv.hpp"

#include <cstdio>
#include <fstream>

#include "spconf/errors.hpp"

namespace spconf::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string>& header(Schema schema) {
  static const std::vector<std::string> surface{
      "nu",       "theta_c",  "theta_u",   "p_c",       "p_z",
      "c_s_mean", "c_s_mcse", "c_ns_mean", "c_ns_mcse", "n_fail"};
  static const std::vector<std::string> error_table{
      "scenario", "model",     "replicate", "beta_x_hat",
      "error",    "abs_error", "seed",      "flagged"};
  static const std::vector<std::string> summary{
      "scenario",   "model",      "n",          "n_flagged",
      "median_abs_error", "q1_abs_error", "q3_abs_error", "whisker_lo",
      "whisker_hi", "mean_error", "mc_se"};
  static const std::vector<std::string> bias_report{"model", "bias", "a2_star",
                                                    "b2"};
  static const std::vector<std::string> mcmc_trace{"parameter", "iteration",
                                                   "value"};
  switch (schema) {
    case Schema::Surface: return surface;
    case Schema::ErrorTable: return error_table;
    case Schema::Summary: return summary;
    case Schema::BiasReport: return bias_report;
    case Schema::McmcTrace: return mcmc_trace;
  }
  throw DomainError("csv::header: unknown schema");
}

namespace {

void append_cell(std::string& line, const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    line += format_double(std::get<double>(cell));
  } else if (std::holds_alternative<long>(cell)) {
    line += std::to_string(std::get<long>(cell));
  } else {
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n\r") != std::string::npos)
      throw DomainError("emit_csv: string cell contains a delimiter: " + s);
    line += s;
  }
}

} // namespace

void emit_csv(const std::vector<Row>& rows, Schema schema,
              const std::filesystem::path& path) {
  const auto& cols = header(schema);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string());
  std::string line;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += ',';
    line += cols[i];
  }
  line += '\n';
  out << line;
  for (const auto& row : rows) {
    if (row.size() != cols.size())
      throw DomainError("emit_csv: row arity does not match schema header");
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      append_cell(line, row[i]);
    }
    line += '\n';
    out << line;
  }
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

std::vector<Row> rows_from(const SurfaceResult& surface) {
  std::vector<Row> rows;
  rows.reserve(surface.cells.size());
  for (const auto& cell : surface.cells)
    rows.push_back(Row{surface.spec.nu, cell.theta_c, cell.theta_u,
                       surface.spec.p_c, surface.spec.p_z, cell.c_s_mean,
                       cell.c_s_mcse, cell.c_ns_mean, cell.c_ns_mcse,
                       static_cast<long>(cell.n_fail)});
  return rows;
}

std::vector<Row> rows_from(const ErrorTable& table) {
  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows)
    rows.push_back(Row{r.scenario, model_tag(r.model),
                       static_cast<long>(r.replicate), r.beta_x_hat, r.error,
                       r.abs_error, std::to_string(r.seed),
                       static_cast<long>(r.flagged ? 1 : 0)});
  return rows;
}

std::vector<Row> rows_from(const std::vector<SummaryRow>& summary) {
  std::vector<Row> rows;
  rows.reserve(summary.size());
  for (const auto& s : summary)
    rows.push_back(Row{s.scenario, model_tag(s.model), static_cast<long>(s.n),
                       static_cast<long>(s.n_flagged), s.median_abs_error,
                       s.q1_abs_error, s.q3_abs_error, s.whisker_lo,
                       s.whisker_hi, s.mean_error, s.mc_se});
  return rows;
}

std::vector<Row> rows_from(const BiasReport& report) {
  double a2_star = std::numeric_limits<double>::quiet_NaN();
  double b2 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [name, value] : report.components) {
    if (name == "A2_star") a2_star = value;
    if (name == "B2") b2 = value;
  }
  return {Row{model_tag(report.model), report.bias, a2_star, b2}};
}

std::vector<Row> rows_from_chain(const MCMCChain& chain) {
  std::vector<Row> rows;
  rows.reserve(chain.beta_x.size() + chain.sigma2.size() + chain.tau2.size());
  for (std::size_t i = 0; i < chain.beta_x.size(); ++i)
    rows.push_back(Row{std::string("beta_x"), static_cast<long>(i), chain.beta_x[i]});
  for (std::size_t i = 0; i < chain.sigma2.size(); ++i)
    rows.push_back(Row{std::string("sigma2"), static_cast<long>(i), chain.sigma2[i]});
  for (std::size_t i = 0; i < chain.tau2.size(); ++i)
    rows.push_back(Row{std::string("tau2"), static_cast<long>(i), chain.tau2[i]});
  return rows;
}

} // namespace spconf::csv
