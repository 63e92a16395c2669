#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spconf/errors.hpp"
#include "spconf/laplacian.hpp"
#include "spconf/metric.hpp"
#include "spconf/rng.hpp"

using namespace spconf;

TEST_CASE("precision inner product with identity metric is Euclidean") {
  const auto m = PrecisionMetric::identity(4);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  CHECK(precision_inner_product(ones, ones, m) == 4.0);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd a(4), b(4);
    for (int k = 0; k < 4; ++k) {
      a(k) = rng.normal();
      b(k) = rng.normal();
    }
    CHECK(precision_inner_product(a, b, m) == a.dot(b));
  }
}

TEST_CASE("metric-orthogonal vectors have zero inner product") {
  const PrecisionMetric m{test::random_spd(6, 0.5, 4.0, 11)};
  Rng rng(12);
  Eigen::VectorXd a(6), c(6);
  for (int k = 0; k < 6; ++k) {
    a(k) = rng.normal();
    c(k) = rng.normal();
  }
  const Eigen::VectorXd b =
      c - (precision_inner_product(c, a, m) / precision_inner_product(a, a, m)) * a;
  CHECK(std::abs(precision_inner_product(a, b, m)) < 1e-12);
}

TEST_CASE("precision inner product matches its spectral form") {
  const Eigen::MatrixXd mat = test::random_spd(8, 0.2, 5.0, 21);
  const PrecisionMetric m{mat};
  const auto decomp = SpectralDecomposition::compute(m);
  Rng rng(22);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd a(8), b(8);
    for (int k = 0; k < 8; ++k) {
      a(k) = rng.normal();
      b(k) = rng.normal();
    }
    const Eigen::VectorXd ua = decomp.u.transpose() * a;
    const Eigen::VectorXd ub = decomp.u.transpose() * b;
    const double spectral = (decomp.d.array() * ua.array() * ub.array()).sum();
    CHECK(precision_inner_product(a, b, m) == doctest::Approx(spectral).epsilon(1e-10));
  }
}

TEST_CASE("precision inner product rejects dimension mismatches") {
  const auto m = PrecisionMetric::identity(4);
  const Eigen::VectorXd a = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(precision_inner_product(a, b, m), DomainError);
}

TEST_CASE("PrecisionMetric validates symmetry and positivity") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(PrecisionMetric{asym}, DomainError);
  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(PrecisionMetric{indef}, ConditioningError);
}

TEST_CASE("angles degenerate cases under any metric") {
  const PrecisionMetric m{test::random_spd(5, 0.3, 3.0, 31)};
  Rng rng(32);
  Eigen::VectorXd a(5);
  for (int k = 0; k < 5; ++k) a(k) = rng.normal();
  CHECK(precision_angle(a, a, m) < 1e-9);
  CHECK(std::abs(precision_angle(a, -a, m) - M_PI) < 1e-9);
}

TEST_CASE("spectral decomposition invariants") {
  const Eigen::MatrixXd mat = test::random_spd(12, 0.1, 9.0, 41);
  const auto decomp = SpectralDecomposition::compute(mat);
  // descending eigenvalues, positive
  for (int i = 0; i + 1 < 12; ++i) CHECK(decomp.d(i) >= decomp.d(i + 1));
  CHECK(decomp.d(11) > 0.0);
  // unit columns
  for (int i = 0; i < 12; ++i)
    CHECK(decomp.u.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  // reconstruction
  const Eigen::MatrixXd rec = decomp.u * decomp.d.asDiagonal() * decomp.u.transpose();
  CHECK((rec - mat).norm() / mat.norm() < 1e-8);
}

TEST_CASE("eigen angles against eigenvector columns") {
  const Eigen::MatrixXd mat = test::random_spd(7, 0.5, 2.0, 51);
  const auto decomp = SpectralDecomposition::compute(mat);

  const Eigen::VectorXd angles = eigen_angles(decomp.u.col(0), decomp);
  CHECK(angles(0) < 1e-7);
  for (int i = 1; i < 7; ++i)
    CHECK(angles(i) == doctest::Approx(M_PI / 2).epsilon(1e-7));

  const Eigen::VectorXd flipped = eigen_angles(-decomp.u.col(0), decomp);
  CHECK(flipped(0) == doctest::Approx(M_PI).epsilon(1e-7));

  CHECK_THROWS_AS(eigen_angles(Eigen::VectorXd::Zero(7), decomp), DomainError);
}

TEST_CASE("weighted squared cosines recover the metric norm ratio") {
  const Eigen::MatrixXd mat = test::random_spd(9, 0.2, 6.0, 61);
  const PrecisionMetric m{mat};
  const auto decomp = SpectralDecomposition::compute(m);
  Rng rng(62);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd v(9);
    for (int k = 0; k < 9; ++k) v(k) = rng.normal();
    const Eigen::VectorXd angles = eigen_angles(v, decomp);
    double weighted = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double c = std::cos(angles(i));
      weighted += decomp.d(i) * c * c;
    }
    const double want =
        precision_inner_product(v, v, m) / v.squaredNorm();
    CHECK(weighted == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("graph laplacian on paths") {
  Eigen::MatrixXi path2(2, 2);
  path2 << 0, 1, 1, 0;
  const Eigen::MatrixXd q2(graph_laplacian(path2));
  CHECK(q2(0, 0) == 1.0);
  CHECK(q2(0, 1) == -1.0);
  CHECK(q2(1, 0) == -1.0);
  CHECK(q2(1, 1) == 1.0);

  Eigen::MatrixXi path3 = Eigen::MatrixXi::Zero(3, 3);
  path3(0, 1) = path3(1, 0) = 1;
  path3(1, 2) = path3(2, 1) = 1;
  const Eigen::MatrixXd q3(graph_laplacian(path3));
  Eigen::MatrixXd want(3, 3);
  want << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((q3 - want).norm() == 0.0);
}

TEST_CASE("11x11 rook grid laplacian: zero row sums and rank 120") {
  const auto q = graph_laplacian(rook_adjacency(11));
  const Eigen::MatrixXd dense(q);
  for (int i = 0; i < 121; ++i) CHECK(dense.row(i).sum() == 0.0);

  const auto decomp = SpectralDecomposition::compute(dense);
  int positive = 0;
  for (int i = 0; i < 121; ++i)
    if (decomp.d(i) > 1e-9) ++positive;
  CHECK(positive == 120);
  CHECK(std::abs(decomp.d(120)) < 1e-9);
}

TEST_CASE("graph laplacian rejects malformed graphs") {
  Eigen::MatrixXi disconnected = Eigen::MatrixXi::Zero(4, 4);
  disconnected(0, 1) = disconnected(1, 0) = 1;
  disconnected(2, 3) = disconnected(3, 2) = 1;
  CHECK_THROWS_AS(graph_laplacian(disconnected), StructuralError);

  Eigen::MatrixXi asym = Eigen::MatrixXi::Zero(3, 3);
  asym(0, 1) = 1;
  asym(1, 2) = asym(2, 1) = 1;
  CHECK_THROWS_AS(graph_laplacian(asym), StructuralError);

  Eigen::MatrixXi diag = Eigen::MatrixXi::Zero(2, 2);
  diag(0, 0) = 1;
  diag(0, 1) = diag(1, 0) = 1;
  CHECK_THROWS_AS(graph_laplacian(diag), StructuralError);

  Eigen::MatrixXi weighted = Eigen::MatrixXi::Zero(2, 2);
  weighted(0, 1) = weighted(1, 0) = 2;
  CHECK_THROWS_AS(graph_laplacian(weighted), StructuralError);
}

TEST_CASE("smallest nonzero eigenvector is orthogonal to constants") {
  const auto q = graph_laplacian(rook_adjacency(5));
  const auto low = smallest_nonzero_eigenvector(q);
  CHECK(low.eigenvalue > 1e-8);
  CHECK(low.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(low.vector.sum()) < 1e-10);
  const Eigen::VectorXd qz = Eigen::MatrixXd(q) * low.vector;
  CHECK((qz - low.eigenvalue * low.vector).norm() < 1e-8);
}
