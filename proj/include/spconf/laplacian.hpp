#ifndef SPCONF_LAPLACIAN_HPP
#define SPCONF_LAPLACIAN_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace spconf {

// Binary rook adjacency of a side x side grid (shared edge = neighbour).
Eigen::MatrixXi rook_adjacency(int side);

// Q = diag(A 1) - A for a symmetric, binary, hollow adjacency matrix of a
// connected graph. Q 1 = 0; for a connected graph Q has exactly one zero
// eigenvalue.
Eigen::SparseMatrix<double> graph_laplacian(const Eigen::MatrixXi& adjacency);

// Unit-norm eigenvector of Q for the smallest nonzero eigenvalue, with sign
// fixed so the largest-magnitude entry is positive. Also returns the
// eigenvalue.
struct LowFrequencyEigenvector {
  Eigen::VectorXd vector;
  double eigenvalue;
};
LowFrequencyEigenvector smallest_nonzero_eigenvector(
    const Eigen::SparseMatrix<double>& q);

} // namespace spconf

#endif
