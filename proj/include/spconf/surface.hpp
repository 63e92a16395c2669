#ifndef SPCONF_SURFACE_HPP
#define SPCONF_SURFACE_HPP

#include <cstdint>
#include <vector>

#include "spconf/kernels.hpp"

namespace spconf {

// Monte-Carlo surfaces of the expected bias-modification terms
//   c_S(X)  = [ (X*' S^{-1} X*)^{-1} X*' S^{-1} K (X - mu_x 1) ]_2
//   c_NS(X) = [ (X*' X*)^{-1} X*' K (X - mu_x 1) ]_2
// averaged over X draws, on a (theta_c, theta_u) grid. Marginal variances are
// reconstructed from (p_c, p_z): sigma_c^2 = p_c, sigma_u^2 = 1 - p_c,
// sigma_z^2 = 1, beta_z = 1, sigma^2 = (1 - p_z)/p_z; the bracketed terms
// depend on the variance parameters only through these fractions.
struct SurfaceSpec {
  double nu = 2.0;
  std::vector<double> theta_c_grid;
  std::vector<double> theta_u_grid;
  double p_c = 0.5;
  double p_z = 0.5;
  int grid_side = 10; // locations: grid_side^2 lattice on the unit square
  int replicates = 200;
  std::uint64_t seed = 0;
  double nugget = 1e-8;

  void validate() const;
  static std::vector<double> default_theta_grid();
};

struct SurfaceCell {
  double theta_c = 0.0;
  double theta_u = 0.0;
  double c_s_mean = 0.0;
  double c_s_mcse = 0.0;
  double c_ns_mean = 0.0;
  double c_ns_mcse = 0.0;
  int n_fail = 0; // replicates lost to conditioning failures (cell-level
                  // failure marks all replicates failed)
};

struct SurfaceResult {
  SurfaceSpec spec;
  std::vector<SurfaceCell> cells; // row-major over theta_c x theta_u
};

SurfaceResult c_surface(const SurfaceSpec& spec);

} // namespace spconf

#endif
