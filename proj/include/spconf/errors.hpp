#ifndef SPCONF_ERRORS_HPP
#define SPCONF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spconf {

// Invalid argument values (non-finite inputs, out-of-range parameters,
// dimension mismatches).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix that should be positive definite is not, or a factorization failed.
class ConditioningError : public std::runtime_error {
public:
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// A regression design is rank deficient (constant regressor, collinearity).
class RankError : public std::runtime_error {
public:
  explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative optimizer exhausted its budget without meeting tolerance.
// Carries the best iterate found so the caller can still inspect it.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double best_objective)
      : std::runtime_error(what), best_objective_(best_objective) {}
  double best_objective() const { return best_objective_; }

private:
  double best_objective_;
};

// Structural problems with graphs (disconnected, non-symmetric adjacency).
class StructuralError : public std::runtime_error {
public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// A Markov chain produced a non-finite draw.
class SamplerError : public std::runtime_error {
public:
  SamplerError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const { return iteration_; }

private:
  long iteration_;
};

} // namespace spconf

#endif
