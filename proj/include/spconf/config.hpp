#ifndef SPCONF_CONFIG_HPP
#define SPCONF_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "spconf/experiments.hpp"
#include "spconf/surface.hpp"

namespace spconf {

// Cross product of (p_c, p_z) values, each combination one SurfaceSpec.
struct SurfaceRunConfig {
  double nu = 2.0;
  std::vector<double> theta_c_grid = SurfaceSpec::default_theta_grid();
  std::vector<double> theta_u_grid = SurfaceSpec::default_theta_grid();
  std::vector<double> p_c_values{0.1, 0.5, 0.9};
  std::vector<double> p_z_values{0.1, 0.5, 0.9};
  int grid_side = 10;
  int replicates = 200;
  double nugget = 1e-8;
};

struct BiasRunConfig {
  std::string model; // ols | gls | splus | gsem
  std::filesystem::path inputs;
};

// Fully-resolved run description. Parsing materializes every default so the
// resolved-config echo can be re-parsed into an identical RunConfig.
struct RunConfig {
  std::string subcommand; // surface | geostat-study | areal-study | bias
  std::uint64_t seed = 0;
  std::string preset = "desk"; // desk | paper
  std::filesystem::path out_dir;
  std::optional<SurfaceRunConfig> surface;
  std::optional<GeostatStudyConfig> geostat;
  std::optional<ArealStudyConfig> areal;
  std::optional<BiasRunConfig> bias;
};

// Strict parse: unknown keys are hard errors naming the key; out-of-range
// values are errors naming the violated constraint. The preset fills scale
// defaults (geostat n/replicates, areal replicates/MCMC size); explicit keys
// override it.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_file(const std::filesystem::path& path);

nlohmann::json resolved_config_json(const RunConfig& config);

// resolved-config.json and run-manifest.json (the manifest holds the single
// timestamp line; everything else in the directory is byte-reproducible)
void write_resolved_config(const RunConfig& config,
                           const std::filesystem::path& dir);
void write_run_manifest(const RunConfig& config,
                        const std::filesystem::path& dir);

bool operator==(const SurfaceRunConfig& a, const SurfaceRunConfig& b);
bool operator==(const BiasRunConfig& a, const BiasRunConfig& b);
bool operator==(const GeostatStudyConfig& a, const GeostatStudyConfig& b);
bool operator==(const ArealStudyConfig& a, const ArealStudyConfig& b);
bool operator==(const McmcConfig& a, const McmcConfig& b);
bool operator==(const GeneratingCoefficients& a, const GeneratingCoefficients& b);
bool operator==(const RunConfig& a, const RunConfig& b);

} // namespace spconf

#endif
