#ifndef SPCONF_OPTIM_HPP
#define SPCONF_OPTIM_HPP

#include <Eigen/Dense>
#include <functional>

namespace spconf {

struct NelderMeadOptions {
  int max_iterations = 400;
  double f_tolerance = 1e-10;   // relative spread of simplex values
  double initial_step = 0.75;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f;
  int iterations;
  bool converged;
};

// Derivative-free simplex minimization with box constraints enforced by
// projection. `lower`/`upper` bound each coordinate.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const NelderMeadOptions& opts = {});

} // namespace spconf

#endif
