#include "spconf/laplacian.hpp"

#include <vector>

#include "spconf/errors.hpp"
#include "spconf/metric.hpp"

namespace spconf {

Eigen::MatrixXi rook_adjacency(int side) {
  if (side < 2) throw DomainError("rook_adjacency: side must be >= 2");
  const int n = side * side;
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  auto idx = [side](int i, int j) { return i * side + j; };
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      if (i + 1 < side) a(idx(i, j), idx(i + 1, j)) = a(idx(i + 1, j), idx(i, j)) = 1;
      if (j + 1 < side) a(idx(i, j), idx(i, j + 1)) = a(idx(i, j + 1), idx(i, j)) = 1;
    }
  return a;
}

namespace {

bool connected(const Eigen::MatrixXi& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w)
      if (a(v, w) != 0 && !seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

} // namespace

Eigen::SparseMatrix<double> graph_laplacian(const Eigen::MatrixXi& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n)
    throw StructuralError("graph_laplacian: adjacency must be square");
  for (int i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0)
      throw StructuralError("graph_laplacian: adjacency diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      if (adjacency(i, j) != adjacency(j, i))
        throw StructuralError("graph_laplacian: adjacency must be symmetric");
      if (adjacency(i, j) != 0 && adjacency(i, j) != 1)
        throw StructuralError("graph_laplacian: adjacency must be binary");
    }
  }
  if (!connected(adjacency))
    throw StructuralError("graph_laplacian: graph is not connected");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(adjacency.sum() + n));
  for (int i = 0; i < n; ++i) {
    int degree = 0;
    for (int j = 0; j < n; ++j)
      if (adjacency(i, j) != 0) {
        ++degree;
        trips.emplace_back(i, j, -1.0);
      }
    trips.emplace_back(i, i, static_cast<double>(degree));
  }
  Eigen::SparseMatrix<double> q(n, n);
  q.setFromTriplets(trips.begin(), trips.end());
  return q;
}

LowFrequencyEigenvector smallest_nonzero_eigenvector(
    const Eigen::SparseMatrix<double>& q) {
  const Eigen::MatrixXd dense(q);
  const auto decomp = SpectralDecomposition::compute(dense);
  const auto n = dense.rows();
  // eigenvalues are sorted descending; the last is the structural zero
  LowFrequencyEigenvector out;
  out.eigenvalue = decomp.d(n - 2);
  out.vector = decomp.u.col(n - 2);
  Eigen::Index imax;
  out.vector.cwiseAbs().maxCoeff(&imax);
  if (out.vector(imax) < 0.0) out.vector = -out.vector;
  return out;
}

} // namespace spconf
