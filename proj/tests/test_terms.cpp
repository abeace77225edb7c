#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace tracial;

namespace {

std::uint64_t geometric_count(int n, int d) {
  std::uint64_t total = 0, power = 1;
  for (int j = 1; j <= d; ++j) total += (power *= 2 * n);
  return total;
}

// Independent enumeration: all words of length k over 2n letters via
// recursion, collected into an ordered set keyed by (degree, indices).
std::vector<std::vector<int>> brute_words(int n, int d) {
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= d; ++k) {
    std::vector<std::vector<int>> level{{}};
    for (int pos = 0; pos < k; ++pos) {
      std::vector<std::vector<int>> next;
      for (const auto& w : level)
        for (int a = 0; a < 2 * n; ++a) {
          auto x = w;
          x.push_back(a);
          next.push_back(x);
        }
      level = next;
    }
    std::set<std::vector<int>> sorted(level.begin(), level.end());
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  return out;
}

}  // namespace

TEST(Monomials, SmallCases) {
  auto m11 = enumerate_monomials(1, 1);
  ASSERT_EQ(m11.size(), 2u);
  EXPECT_EQ(m11[0].to_string(), "x1");
  EXPECT_EQ(m11[1].to_string(), "x1'");

  auto m12 = enumerate_monomials(1, 2);
  ASSERT_EQ(m12.size(), 6u);
  std::vector<std::string> expected{"x1", "x1'", "x1 x1", "x1 x1'", "x1' x1", "x1' x1'"};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(m12[k].to_string(), expected[k]);

  EXPECT_EQ(enumerate_monomials(2, 4).size(), 340u);
}

TEST(Monomials, CountMatchesGeometricSum) {
  EXPECT_EQ(monomial_count(1, 1), 2u);
  EXPECT_EQ(monomial_count(3, 1), 6u);
  EXPECT_EQ(monomial_count(2, 2), 20u);
  for (int n = 1; n <= 5; ++n)
    for (int d = 1; d <= 6; ++d) EXPECT_EQ(monomial_count(n, d), geometric_count(n, d)) << n << "," << d;
}

TEST(Monomials, InvalidArguments) {
  EXPECT_THROW(monomial_count(0, 1), InvalidArgument);
  EXPECT_THROW(monomial_count(1, 0), InvalidArgument);
  EXPECT_THROW(enumerate_monomials(-1, 2), InvalidArgument);
  try {
    monomial_count(0, 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "invalid-argument");
  }
}

TEST(Monomials, EnumerationAgreesWithBruteForceAndIsStrictlyOrdered) {
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 4; ++d) {
      const auto mons = enumerate_monomials(n, d);
      const auto words = brute_words(n, d);
      ASSERT_EQ(mons.size(), words.size());
      for (std::size_t k = 0; k < mons.size(); ++k) {
        std::vector<int> idx;
        for (const Letter& l : mons[k].letters()) idx.push_back(l.alphabet_index());
        EXPECT_EQ(idx, words[k]);
        if (k > 0) EXPECT_TRUE(mons[k - 1] < mons[k]);
      }
    }
}

TEST(Monomials, AdjointExamples) {
  StarMonomial m({Letter{1, false}, Letter{2, true}});
  EXPECT_EQ(monomial_adjoint(m).to_string(), "x2 x1'");
  EXPECT_EQ(monomial_adjoint(StarMonomial({Letter{1, false}})).to_string(), "x1'");
  EXPECT_TRUE(monomial_adjoint(StarMonomial()).is_identity());
}

TEST(Monomials, AdjointIsAnInvolution) {
  for (int n = 1; n <= 3; ++n)
    for (const auto& m : enumerate_monomials(n, 4)) {
      EXPECT_EQ(monomial_adjoint(monomial_adjoint(m)), m);
      EXPECT_EQ(monomial_adjoint(m).degree(), m.degree());
    }
}

TEST(Terms, DoubleAdjointEvaluatesLikeTheTerm) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Term t = testsupport::random_term(rng, 3, 2);
    const MatrixTuple a = random_contraction_tuple(3, {1, 2}, rng);
    const ComplexMatrix lhs = eval_term(Term::adjoint(Term::adjoint(t)), a);
    EXPECT_LT((lhs - eval_term(t, a)).norm(), 1e-12);
  }
}

TEST(Terms, FromMonomialMatchesLetterProduct) {
  Rng rng(3);
  const MatrixTuple a = random_contraction_tuple(2, {1, 2}, rng);
  const StarMonomial m({Letter{1, false}, Letter{2, true}, Letter{1, true}});
  const ComplexMatrix expected = a.at(1) * a.at(2).adjoint() * a.at(1).adjoint();
  EXPECT_LT((eval_term(Term::from_monomial(m), a) - expected).norm(), 1e-14);
  EXPECT_EQ(Term::from_monomial(m).max_var(), 2);
}

TEST(Terms, Printing) {
  const Term t = Term::sum(Term::var(1), Term::scale(ComplexRational(Rational(-1)), Term::adjoint(Term::var(2))));
  EXPECT_EQ(print_term(t), "(x1 + -1 x2')");
  EXPECT_EQ(print_term(Term::scale(ComplexRational(Rational(1, 2), Rational(-3)), Term::one())), "[1/2, -3]");
  EXPECT_EQ(print_term(Term::adjoint(Term::prod(Term::var(1), Term::var(2)))), "(x1 * x2)'");
  EXPECT_EQ(print_term(Term::adjoint(Term::one())), "(1)'");
  EXPECT_TRUE(parse_term("(1)'") == Term::adjoint(Term::one()));
}
