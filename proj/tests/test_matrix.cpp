#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace tracial;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (double x : d) {
    a(k, k) = x;
    ++k;
  }
  return a;
}

// Oracle for the largest singular value: sqrt of the top eigenvalue of a*a
// by power iteration.
double power_iteration_norm(const ComplexMatrix& a) {
  const ComplexMatrix g = a.adjoint() * a;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(g.rows());
  double lambda = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXcd w = g * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lambda = nw / v.norm();
    v = w / nw;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST(Trace, Examples) {
  EXPECT_NEAR(std::abs(normalized_trace(ComplexMatrix::Identity(5, 5)) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_EQ(normalized_trace(ComplexMatrix::Zero(3, 3)), Complex(0.0));
  EXPECT_NEAR(normalized_trace(diag({1, 0, 0})).real(), 1.0 / 3.0, 1e-15);
}

TEST(Trace, Cyclicity) {
  Rng rng(1);
  for (int p = 1; p <= 8; ++p)
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_gaussian(p, rng), b = random_gaussian(p, rng);
      EXPECT_LT(std::abs(normalized_trace(a * b) - normalized_trace(b * a)), 1e-10);
    }
}

TEST(TwoNorm, Examples) {
  EXPECT_NEAR(two_norm(ComplexMatrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(two_norm(diag({1, 0})), 1.0 / std::sqrt(2.0), 1e-15);
  Eigen::VectorXcd u = Eigen::VectorXcd::Ones(4) / 2.0;
  EXPECT_NEAR(two_norm(u * u.adjoint()), 0.5, 1e-15);
}

TEST(OperatorNorm, ExamplesAndOracle) {
  EXPECT_NEAR(operator_norm(ComplexMatrix::Identity(4, 4)), 1.0, 1e-12);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(3);
  u(1) = 1.0;
  EXPECT_NEAR(operator_norm(3.0 * u * u.adjoint()), 3.0, 1e-12);
  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 2.0;
  EXPECT_NEAR(operator_norm(nil), 2.0, 1e-12);
  Rng rng(5);
  for (int p = 1; p <= 6; ++p) {
    const ComplexMatrix a = random_gaussian(p, rng);
    EXPECT_NEAR(operator_norm(a), power_iteration_norm(a), 1e-6);
    EXPECT_LE(two_norm(a), operator_norm(a) + 1e-10);
  }
}

TEST(Contraction, Projection) {
  EXPECT_LT((project_to_contraction(2.0 * ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm(),
            1e-12);
  EXPECT_LT((project_to_contraction(diag({3, 0.5})) - diag({1, 0.5})).norm(), 1e-12);
  Rng rng(9);
  for (int p = 1; p <= 6; ++p) {
    const ComplexMatrix c = random_contraction(p, rng);
    EXPECT_LE(operator_norm(c), 1.0 + 1e-12);
    EXPECT_LT((project_to_contraction(c) - c).cwiseAbs().maxCoeff(), 1e-10);
    const ComplexMatrix big = 3.0 * random_gaussian(p, rng);
    const ComplexMatrix once = project_to_contraction(big);
    EXPECT_LE(operator_norm(once), 1.0 + 1e-10);
    EXPECT_LT((project_to_contraction(once) - once).norm(), 1e-10);
  }
}

TEST(Projections, StateOnProducts) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + static_cast<int>(uniform_index(rng, 6));
    const auto a = random_pvm(p, 2, std::nullopt, rng());
    const auto b = random_pvm(p, 3, std::nullopt, rng());
    const double t = normalized_trace(a[0] * b[1]).real();
    EXPECT_GE(t, -1e-12);
    EXPECT_LE(t, 1.0 + 1e-12);
  }
}

TEST(HermitianEig, Examples) {
  const HermitianEig id = hermitian_eig(ComplexMatrix::Identity(3, 3));
  for (double v : id.values) EXPECT_NEAR(v, 1.0, 1e-12);

  const HermitianEig e = hermitian_eig(diag({2, -1}));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], 2.0, 1e-12);
  EXPECT_NEAR(e.values[1], -1.0, 1e-12);
  EXPECT_LT((e.vectors - ComplexMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(HermitianEig, ReconstructionAndConvention) {
  Rng rng(4);
  for (int p = 1; p <= 8; ++p) {
    const ComplexMatrix h = random_hermitian(p, rng);
    const HermitianEig e = hermitian_eig(h);
    Eigen::VectorXd lam(p);
    for (int k = 0; k < p; ++k) lam(k) = e.values[k];
    const ComplexMatrix rebuilt = e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(two_norm(rebuilt - h), 1e-8);
    for (int k = 1; k < p; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
    for (int k = 0; k < p; ++k) {
      const auto col = e.vectors.col(k);
      Eigen::Index first = 0;
      while (std::abs(col(first)) <= 1e-10) ++first;
      EXPECT_GT(col(first).real(), 0.0);
      EXPECT_NEAR(col(first).imag(), 0.0, 1e-12);
    }
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    hermitian_eig(a);
    FAIL() << "expected not-hermitian";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "not-hermitian");
  }
}

TEST(RandomPVM, Examples) {
  const auto scalar = random_pvm(1, 3, std::nullopt, 17);
  int ones = 0;
  for (const auto& x : scalar) {
    const double v = x(0, 0).real();
    EXPECT_TRUE(std::abs(v) < 1e-12 || std::abs(v - 1.0) < 1e-12);
    ones += std::abs(v - 1.0) < 1e-12;
  }
  EXPECT_EQ(ones, 1);

  const auto halves = random_pvm(4, 2, std::vector<int>{2, 2}, 5);
  EXPECT_NEAR(normalized_trace(halves[0]).real(), 0.5, 1e-12);
  EXPECT_NEAR(normalized_trace(halves[1]).real(), 0.5, 1e-12);
  EXPECT_LT(two_norm(halves[0] + halves[1] - ComplexMatrix::Identity(4, 4)), 1e-12);

  EXPECT_THROW(random_pvm(3, 2, std::vector<int>{1, 1}, 0), InvalidArgument);
}

TEST(RandomPVM, ResidualsAndDeterminism) {
  for (int p = 1; p <= 8; ++p)
    for (int m = 1; m <= 5; ++m) {
      const auto g = random_pvm(p, m, std::nullopt, 1000 * p + m);
      const PVMTuple t{p, {g}};
      EXPECT_TRUE(is_pvm(t, 1e-10)) << p << "," << m;
      const auto again = random_pvm(p, m, std::nullopt, 1000 * p + m);
      for (int i = 0; i < m; ++i) EXPECT_EQ(g[i], again[i]);
    }
}

TEST(Compositions, CountAndEnumeration) {
  EXPECT_EQ(composition_count(3, 3), 10u);
  EXPECT_EQ(all_compositions(3, 3).size(), 10u);
  EXPECT_EQ(composition_count(2, 3), 6u);
  for (const auto& c : all_compositions(4, 3)) {
    int s = 0;
    for (int r : c) s += r;
    EXPECT_EQ(s, 4);
  }
}

TEST(Embedding, PreservesTraceAndNorms) {
  Rng rng(8);
  const ComplexMatrix a = random_contraction(3, rng);
  const ComplexMatrix e = embed(a, 2);
  EXPECT_EQ(e.rows(), 6);
  EXPECT_LT(std::abs(normalized_trace(e) - normalized_trace(a)), 1e-14);
  EXPECT_NEAR(two_norm(e), two_norm(a), 1e-14);
  EXPECT_NEAR(operator_norm(e), operator_norm(a), 1e-12);
}
