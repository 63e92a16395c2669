#include "spconf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spconf/errors.hpp"

namespace spconf {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const NelderMeadOptions& opts) {
  const int dim = static_cast<int>(start.size());
  if (lower.size() != dim || upper.size() != dim)
    throw DomainError("nelder_mead: bound dimensions mismatch");

  auto clamp = [&](Eigen::VectorXd v) {
    for (int i = 0; i < dim; ++i) v(i) = std::clamp(v(i), lower(i), upper(i));
    return v;
  };
  auto eval = [&](const Eigen::VectorXd& v) { return f(clamp(v)); };

  std::vector<Eigen::VectorXd> pts(dim + 1);
  std::vector<double> vals(dim + 1);
  pts[0] = clamp(start);
  vals[0] = f(pts[0]);
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd p = pts[0];
    p(i) += opts.initial_step;
    pts[i + 1] = clamp(p);
    vals[i + 1] = f(pts[i + 1]);
  }

  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    std::vector<int> order(dim + 1);
    for (int i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[dim], second_worst = order[dim - 1];

    const double spread = std::abs(vals[worst] - vals[best]);
    const double scale = std::abs(vals[best]) + std::abs(vals[worst]) + 1e-30;
    if (spread <= opts.f_tolerance * scale) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= dim;

    const Eigen::VectorXd reflected = clamp(centroid + (centroid - pts[worst]));
    const double f_reflected = eval(reflected);
    if (f_reflected < vals[best]) {
      const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - pts[worst]));
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
    } else if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
    } else {
      const Eigen::VectorXd contracted =
          clamp(centroid + 0.5 * (pts[worst] - centroid));
      const double f_contracted = eval(contracted);
      if (f_contracted < vals[worst]) {
        pts[worst] = contracted;
        vals[worst] = f_contracted;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          pts[i] = clamp(pts[best] + 0.5 * (pts[i] - pts[best]));
          vals[i] = f(pts[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= dim; ++i)
    if (vals[i] < vals[best]) best = i;
  return NelderMeadResult{pts[best], vals[best], iter, converged};
}

} // namespace spconf
