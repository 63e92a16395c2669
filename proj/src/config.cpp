#include "spconf/config.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "spconf/errors.hpp"

namespace spconf {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& context,
                const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw DomainError("config: " + context + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.contains(item.key()))
      throw DomainError("config: unknown key '" + item.key() + "' in " + context);
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw DomainError("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

long get_integer(const json& j, const std::string& key, long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw DomainError("config: '" + key + "' must be an integer");
  return j.at(key).get<long>();
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw DomainError("config: '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& key,
                                    const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw DomainError("config: '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number())
      throw DomainError("config: '" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Model> get_model_list(const json& j, const std::string& key,
                                  const std::vector<Model>& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw DomainError("config: '" + key + "' must be an array of model tags");
  std::vector<Model> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string())
      throw DomainError("config: '" + key + "' must be an array of model tags");
    out.push_back(model_from_tag(v.get<std::string>()));
  }
  return out;
}

void require_fraction(double v, const std::string& what) {
  if (!(v > 0.0 && v < 1.0))
    throw DomainError("config: " + what + " must lie in the open interval (0, 1)");
}

SurfaceRunConfig parse_surface(const json& j) {
  check_keys(j, "surface",
             {"nu", "theta_c_grid", "theta_u_grid", "p_c_values", "p_z_values",
              "grid_side", "replicates", "nugget"});
  SurfaceRunConfig c;
  c.nu = get_number(j, "nu", c.nu);
  if (!(c.nu > 0.0)) throw DomainError("config: surface.nu must be > 0");
  c.theta_c_grid = get_number_list(j, "theta_c_grid", c.theta_c_grid);
  c.theta_u_grid = get_number_list(j, "theta_u_grid", c.theta_u_grid);
  c.p_c_values = get_number_list(j, "p_c_values", c.p_c_values);
  c.p_z_values = get_number_list(j, "p_z_values", c.p_z_values);
  for (const double p : c.p_c_values) require_fraction(p, "surface.p_c_values");
  for (const double p : c.p_z_values) require_fraction(p, "surface.p_z_values");
  for (const double t : c.theta_c_grid)
    if (!(t > 0.0)) throw DomainError("config: surface.theta_c_grid must be positive");
  for (const double t : c.theta_u_grid)
    if (!(t > 0.0)) throw DomainError("config: surface.theta_u_grid must be positive");
  c.grid_side = static_cast<int>(get_integer(j, "grid_side", c.grid_side));
  if (c.grid_side < 2) throw DomainError("config: surface.grid_side must be >= 2");
  c.replicates = static_cast<int>(get_integer(j, "replicates", c.replicates));
  if (c.replicates < 1) throw DomainError("config: surface.replicates must be >= 1");
  c.nugget = get_number(j, "nugget", c.nugget);
  if (!(c.nugget >= 0.0)) throw DomainError("config: surface.nugget must be >= 0");
  return c;
}

GeostatStudyConfig parse_geostat(const json& j, const std::string& preset) {
  check_keys(j, "geostat-study",
             {"n", "window_lo", "window_hi", "theta_c_grid", "theta_u_grid",
              "rho_grid", "replicates", "sigma_c2", "sigma_u2", "sigma_z2",
              "beta0", "beta_x", "beta_z", "sigma2", "models", "nugget"});
  GeostatStudyConfig c;
  if (preset == "desk") c.apply_desk_preset();
  c.n = static_cast<int>(get_integer(j, "n", c.n));
  c.window_lo = get_number(j, "window_lo", c.window_lo);
  c.window_hi = get_number(j, "window_hi", c.window_hi);
  c.theta_c_grid = get_number_list(j, "theta_c_grid", c.theta_c_grid);
  c.theta_u_grid = get_number_list(j, "theta_u_grid", c.theta_u_grid);
  c.rho_grid = get_number_list(j, "rho_grid", c.rho_grid);
  c.replicates = static_cast<int>(get_integer(j, "replicates", c.replicates));
  c.sigma_c2 = get_number(j, "sigma_c2", c.sigma_c2);
  c.sigma_u2 = get_number(j, "sigma_u2", c.sigma_u2);
  c.sigma_z2 = get_number(j, "sigma_z2", c.sigma_z2);
  c.coeffs.beta0 = get_number(j, "beta0", c.coeffs.beta0);
  c.coeffs.beta_x = get_number(j, "beta_x", c.coeffs.beta_x);
  c.coeffs.beta_z = get_number(j, "beta_z", c.coeffs.beta_z);
  c.coeffs.sigma2 = get_number(j, "sigma2", c.coeffs.sigma2);
  c.models = get_model_list(j, "models", c.models);
  c.nugget = get_number(j, "nugget", c.nugget);
  c.validate();
  return c;
}

ArealStudyConfig parse_areal(const json& j, const std::string& preset) {
  check_keys(j, "areal-study",
             {"grid_side", "z_mode", "beta_z", "beta_x", "z_sd", "eps_x_sd",
              "eps_sd", "replicates", "mcmc", "models"});
  ArealStudyConfig c;
  if (preset == "desk") c.apply_desk_preset();
  c.grid_side = static_cast<int>(get_integer(j, "grid_side", c.grid_side));
  const std::string mode = get_string(
      j, "z_mode", c.z_mode == ArealZMode::Random ? "random" : "eigenvector");
  if (mode == "random")
    c.z_mode = ArealZMode::Random;
  else if (mode == "eigenvector")
    c.z_mode = ArealZMode::Eigenvector;
  else
    throw DomainError("config: areal-study.z_mode must be 'random' or 'eigenvector'");
  c.beta_z = get_number(j, "beta_z", c.beta_z);
  c.beta_x = get_number(j, "beta_x", c.beta_x);
  c.z_sd = get_number(j, "z_sd", c.z_sd);
  c.eps_x_sd = get_number(j, "eps_x_sd", c.eps_x_sd);
  c.eps_sd = get_number(j, "eps_sd", c.eps_sd);
  c.replicates = static_cast<int>(get_integer(j, "replicates", c.replicates));
  if (j.contains("mcmc")) {
    const json& m = j.at("mcmc");
    check_keys(m, "areal-study.mcmc",
               {"iterations", "burn_in", "prior_shape", "prior_rate"});
    c.mcmc.iterations = get_integer(m, "iterations", c.mcmc.iterations);
    c.mcmc.burn_in = get_integer(m, "burn_in", c.mcmc.burn_in);
    c.mcmc.prior_shape = get_number(m, "prior_shape", c.mcmc.prior_shape);
    c.mcmc.prior_rate = get_number(m, "prior_rate", c.mcmc.prior_rate);
  }
  c.models = get_model_list(j, "models", c.models);
  c.validate();
  return c;
}

BiasRunConfig parse_bias(const json& j) {
  check_keys(j, "bias", {"model", "inputs"});
  BiasRunConfig c;
  c.model = get_string(j, "model", "");
  if (c.model != "ols" && c.model != "gls" && c.model != "splus" &&
      c.model != "gsem")
    throw DomainError("config: bias.model must be one of ols|gls|splus|gsem");
  const std::string inputs = get_string(j, "inputs", "");
  if (inputs.empty()) throw DomainError("config: bias.inputs is required");
  c.inputs = inputs;
  return c;
}

} // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, "top level",
             {"subcommand", "seed", "preset", "out", "surface", "geostat-study",
              "areal-study", "bias"});
  RunConfig config;
  config.subcommand = get_string(j, "subcommand", "");
  if (config.subcommand != "surface" && config.subcommand != "geostat-study" &&
      config.subcommand != "areal-study" && config.subcommand != "bias")
    throw DomainError(
        "config: subcommand must be one of surface|geostat-study|areal-study|bias");
  if (!j.contains("seed"))
    throw DomainError("config: seed is mandatory (wall-clock seeding is not supported)");
  if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
    throw DomainError("config: seed must be a non-negative integer");
  const auto seed_signed = j.at("seed").get<long long>();
  if (seed_signed < 0) throw DomainError("config: seed must be >= 0");
  config.seed = static_cast<std::uint64_t>(seed_signed);
  config.preset = get_string(j, "preset", "desk");
  if (config.preset != "desk" && config.preset != "paper")
    throw DomainError("config: preset must be 'desk' or 'paper'");
  config.out_dir = get_string(j, "out", "out");

  for (const char* section : {"surface", "geostat-study", "areal-study", "bias"})
    if (j.contains(section) && config.subcommand != section)
      throw DomainError(std::string("config: section '") + section +
                        "' does not match subcommand '" + config.subcommand + "'");

  const json empty = json::object();
  if (config.subcommand == "surface") {
    config.surface = parse_surface(j.contains("surface") ? j.at("surface") : empty);
  } else if (config.subcommand == "geostat-study") {
    config.geostat = parse_geostat(
        j.contains("geostat-study") ? j.at("geostat-study") : empty, config.preset);
    config.geostat->seed = config.seed;
  } else if (config.subcommand == "areal-study") {
    config.areal = parse_areal(
        j.contains("areal-study") ? j.at("areal-study") : empty, config.preset);
    config.areal->seed = config.seed;
  } else {
    config.bias = parse_bias(j.contains("bias") ? j.at("bias") : empty);
  }
  return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw DomainError("config: JSON parse error in " + path.string() + ": " +
                      err.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_config_json(const RunConfig& config) {
  json j;
  j["subcommand"] = config.subcommand;
  j["seed"] = config.seed;
  j["preset"] = config.preset;
  j["out"] = config.out_dir.string();
  if (config.surface) {
    const auto& c = *config.surface;
    j["surface"] = {{"nu", c.nu},
                    {"theta_c_grid", c.theta_c_grid},
                    {"theta_u_grid", c.theta_u_grid},
                    {"p_c_values", c.p_c_values},
                    {"p_z_values", c.p_z_values},
                    {"grid_side", c.grid_side},
                    {"replicates", c.replicates},
                    {"nugget", c.nugget}};
  }
  if (config.geostat) {
    const auto& c = *config.geostat;
    std::vector<std::string> tags;
    for (const Model m : c.models) tags.push_back(model_tag(m));
    j["geostat-study"] = {{"n", c.n},
                          {"window_lo", c.window_lo},
                          {"window_hi", c.window_hi},
                          {"theta_c_grid", c.theta_c_grid},
                          {"theta_u_grid", c.theta_u_grid},
                          {"rho_grid", c.rho_grid},
                          {"replicates", c.replicates},
                          {"sigma_c2", c.sigma_c2},
                          {"sigma_u2", c.sigma_u2},
                          {"sigma_z2", c.sigma_z2},
                          {"beta0", c.coeffs.beta0},
                          {"beta_x", c.coeffs.beta_x},
                          {"beta_z", c.coeffs.beta_z},
                          {"sigma2", c.coeffs.sigma2},
                          {"models", tags},
                          {"nugget", c.nugget}};
  }
  if (config.areal) {
    const auto& c = *config.areal;
    std::vector<std::string> tags;
    for (const Model m : c.models) tags.push_back(model_tag(m));
    j["areal-study"] = {
        {"grid_side", c.grid_side},
        {"z_mode", c.z_mode == ArealZMode::Random ? "random" : "eigenvector"},
        {"beta_z", c.beta_z},
        {"beta_x", c.beta_x},
        {"z_sd", c.z_sd},
        {"eps_x_sd", c.eps_x_sd},
        {"eps_sd", c.eps_sd},
        {"replicates", c.replicates},
        {"mcmc",
         {{"iterations", c.mcmc.iterations},
          {"burn_in", c.mcmc.burn_in},
          {"prior_shape", c.mcmc.prior_shape},
          {"prior_rate", c.mcmc.prior_rate}}},
        {"models", tags}};
  }
  if (config.bias) {
    j["bias"] = {{"model", config.bias->model},
                 {"inputs", config.bias->inputs.string()}};
  }
  return j;
}

void write_resolved_config(const RunConfig& config,
                           const std::filesystem::path& dir) {
  std::ofstream out(dir / "resolved-config.json", std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write resolved-config.json under " +
                             dir.string());
  out << resolved_config_json(config).dump(2) << "\n";
}

void write_run_manifest(const RunConfig& config,
                        const std::filesystem::path& dir) {
  const auto now = std::chrono::system_clock::now();
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  json j;
  j["tool"] = "spconf";
  j["version"] = "0.1.0";
  j["subcommand"] = config.subcommand;
  j["seed"] = config.seed;
  j["preset"] = config.preset;
  j["timestamp_unix"] = secs;
  std::ofstream out(dir / "run-manifest.json", std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write run-manifest.json under " + dir.string());
  out << j.dump(2) << "\n";
}

bool operator==(const SurfaceRunConfig& a, const SurfaceRunConfig& b) {
  return a.nu == b.nu && a.theta_c_grid == b.theta_c_grid &&
         a.theta_u_grid == b.theta_u_grid && a.p_c_values == b.p_c_values &&
         a.p_z_values == b.p_z_values && a.grid_side == b.grid_side &&
         a.replicates == b.replicates && a.nugget == b.nugget;
}

bool operator==(const BiasRunConfig& a, const BiasRunConfig& b) {
  return a.model == b.model && a.inputs == b.inputs;
}

bool operator==(const GeneratingCoefficients& a, const GeneratingCoefficients& b) {
  return a.beta0 == b.beta0 && a.beta_x == b.beta_x && a.beta_z == b.beta_z &&
         a.sigma2 == b.sigma2;
}

bool operator==(const GeostatStudyConfig& a, const GeostatStudyConfig& b) {
  return a.n == b.n && a.window_lo == b.window_lo && a.window_hi == b.window_hi &&
         a.theta_c_grid == b.theta_c_grid && a.theta_u_grid == b.theta_u_grid &&
         a.rho_grid == b.rho_grid && a.replicates == b.replicates &&
         a.sigma_c2 == b.sigma_c2 && a.sigma_u2 == b.sigma_u2 &&
         a.sigma_z2 == b.sigma_z2 && a.coeffs == b.coeffs && a.models == b.models &&
         a.seed == b.seed && a.nugget == b.nugget;
}

bool operator==(const McmcConfig& a, const McmcConfig& b) {
  return a.iterations == b.iterations && a.burn_in == b.burn_in &&
         a.prior_shape == b.prior_shape && a.prior_rate == b.prior_rate;
}

bool operator==(const ArealStudyConfig& a, const ArealStudyConfig& b) {
  return a.grid_side == b.grid_side && a.z_mode == b.z_mode &&
         a.beta_z == b.beta_z && a.beta_x == b.beta_x && a.z_sd == b.z_sd &&
         a.eps_x_sd == b.eps_x_sd && a.eps_sd == b.eps_sd &&
         a.replicates == b.replicates && a.mcmc == b.mcmc && a.models == b.models &&
         a.seed == b.seed;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.subcommand == b.subcommand && a.seed == b.seed && a.preset == b.preset &&
         a.out_dir == b.out_dir && a.surface == b.surface && a.geostat == b.geostat &&
         a.areal == b.areal && a.bias == b.bias;
}

} // namespace spconf
