#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace tracial;

namespace {

OptimizerConfig config(int p, std::uint64_t seed, int restarts = 4, int iters = 400) {
  OptimizerConfig cfg;
  cfg.p = p;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.max_iterations = iters;
  return cfg;
}

MatrixTuple zeros(int p, int k) {
  MatrixTuple t(p);
  for (int v = 1; v <= k; ++v) t.set(v, ComplexMatrix::Zero(p, p));
  return t;
}

}  // namespace

TEST(EvalQF, Examples) {
  const PVMTuple pvm{3, {random_pvm(3, 2, std::nullopt, 1), random_pvm(3, 2, std::nullopt, 2)}};
  EXPECT_LE(eval_qf(build_pvm_formula(2, 2), to_matrix_tuple(pvm)), 1e-9);
  EXPECT_NEAR(eval_qf(build_pvm_formula(1, 2), zeros(2, 2)), 1.0, 1e-15);
  MatrixTuple id(4);
  id.set(1, ComplexMatrix::Identity(4, 4));
  EXPECT_NEAR(eval_qf(parse_formula("trRe(x1)"), id), 1.0, 1e-15);
}

TEST(EvalQF, Errors) {
  MatrixTuple t(2);
  t.set(1, ComplexMatrix::Identity(2, 2));
  try {
    eval_qf(parse_formula("trRe(x2)"), t);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "unbound-variable");
  }
  EXPECT_THROW(t.set(2, ComplexMatrix::Identity(3, 3)), ValidationError);
  EXPECT_THROW(eval_qf(parse_formula("sup x1 . trRe(x1)"), t), Unsupported);
}

TEST(EvalQF, ScalarOracle) {
  // At p = 1 every term is a complex number; compare with direct arithmetic.
  const Complex z(0.3, -0.4), w(-0.5, 0.1);
  MatrixTuple t(1);
  t.set(1, ComplexMatrix::Constant(1, 1, z));
  t.set(2, ComplexMatrix::Constant(1, 1, w));
  EXPECT_NEAR(eval_qf(parse_formula("trIm(x1 x2')"), t), (z * std::conj(w)).imag(), 1e-15);
  EXPECT_NEAR(eval_qf(parse_formula("norm2(x1 + [0, 1] x2)"), t), std::abs(z + Complex(0, 1) * w), 1e-15);
  EXPECT_NEAR(eval_qf(parse_formula("half(trRe(x1) -. trRe(x2)) * 3"), t), 3 * std::max(z.real() - w.real(), 0.0) / 2,
              1e-15);
}

TEST(SupLowerBound, Examples) {
  const Formula body = parse_formula("trRe(x1 x1')");
  for (int p : {1, 2, 4}) {
    const EvalResult r = sup_lower_bound(body, {1}, config(p, 7));
    EXPECT_GE(r.value, 1 - 1e-6) << p;
    EXPECT_EQ(r.bound_kind, BoundKind::LowerBoundOfSup);
  }
  const EvalResult z = sup_lower_bound(parse_formula("1 -. trRe(x1' x1)"), {1}, config(2, 3));
  EXPECT_GE(z.value, 1 - 1e-6);
}

TEST(SupLowerBound, CertificateDeterminismAndMonotonicity) {
  Rng rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const Formula body = testsupport::random_formula(rng, 3, 2, false);
    const OptimizerConfig cfg = config(2, 100 + trial, 3, 150);
    const EvalResult a = sup_lower_bound(body, {1, 2}, cfg);
    EXPECT_NEAR(eval_qf(body, *a.certificate), a.value, 1e-9);

    const EvalResult again = sup_lower_bound(body, {1, 2}, cfg);
    EXPECT_EQ(a.value, again.value);
    EXPECT_TRUE(*a.certificate == *again.certificate);

    OptimizerConfig threaded = cfg;
    threaded.threads = 3;
    EXPECT_EQ(sup_lower_bound(body, {1, 2}, threaded).value, a.value);

    OptimizerConfig more = cfg;
    more.restarts = 6;
    EXPECT_GE(sup_lower_bound(body, {1, 2}, more).value, a.value);
    more = cfg;
    more.max_iterations = 300;
    EXPECT_GE(sup_lower_bound(body, {1, 2}, more).value, a.value);
  }
}

TEST(SupLowerBound, DimensionMonotonicityByEmbedding) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Formula body = testsupport::random_formula(rng, 3, 2, false);
    for (int p : {1, 2}) {
      const EvalResult small = sup_lower_bound(body, {1, 2}, config(p, 40 + trial, 3, 150));
      OptimizerConfig big = config(2 * p, 40 + trial, 3, 150);
      big.warm_starts.push_back(embed(*small.certificate, 2));
      EXPECT_GE(sup_lower_bound(body, {1, 2}, big).value, small.value - 1e-9);
    }
  }
}

TEST(SupLowerBound, ConfigValidation) {
  OptimizerConfig cfg = config(2, 1);
  cfg.restarts = 0;
  try {
    sup_lower_bound(parse_formula("trRe(x1)"), {1}, cfg);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "config-invalid");
  }
  cfg = config(2, 1);
  cfg.decay = 1.5;
  EXPECT_THROW(sup_lower_bound(parse_formula("trRe(x1)"), {1}, cfg), ValidationError);
}

TEST(SupLowerBound, PenalizedGameBodyAgreesWithNet) {
  Rng rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const NonlocalGame g = random_synchronous_game(2, 2, rng);
    const Formula body =
        Formula::dotminus(build_game_formula(g), Formula::scale(10, build_pvm_formula(2, 2)));
    const std::vector<int> vars{1, 2, 3, 4};
    NetEvalOptions opts;
    opts.budget = 400000;
    const EvalResult net = net_eval(body, vars, 1, Rational(1, 2), opts);
    // The body is 0 wherever the penalty dominates, so starts are random PVMs.
    SearchSpace space;
    space.groups = {{1, 2}, {3, 4}};
    space.start = SearchSpace::Start::RandomPVM;
    const EvalResult opt = sup_lower_bound(body, vars, config(1, 8 + trial, 32, 300), space);
    EXPECT_LE(opt.value, net.value + net.gap);
    EXPECT_NEAR(opt.value, net.value, 2e-2);
  }
}

TEST(NetEval, Examples) {
  const EvalResult r = net_eval(parse_formula("trRe(x1' x1)"), {1}, 1, Rational(1, 10));
  EXPECT_GE(r.value, 0.95);
  EXPECT_LE(r.value, 1.0 + 1e-12);
  EXPECT_EQ(r.bound_kind, BoundKind::NetBoundWithGap);

  for (const char* mesh : {"1", "1/3", "1/10"}) {
    const EvalResult c = net_eval(parse_formula("1"), {1}, 1, parse_rational(mesh));
    EXPECT_EQ(c.value, 1.0);
    EXPECT_EQ(c.gap, 0.0);
  }
}

TEST(NetEval, CoveringRadiusBound) {
  for (int p : {1, 2})
    for (const char* mesh : {"1", "1/2", "1/3"}) {
      const Rational q = parse_rational(mesh);
      const MatrixBallGrid grid(p, 1, q, std::numeric_limits<std::uint64_t>::max());
      EXPECT_LE(grid.covering_radius(), to_double(q) * std::sqrt(2.0) * double(grid.real_parameters()));
    }
}

TEST(NetEval, BudgetExceeded) {
  try {
    net_eval(parse_formula("trRe(x1 x2)"), {1, 2}, 2, Rational(1, 10), {});
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.code(), "budget-exceeded");
    EXPECT_NEAR(e.required(), std::pow(21.0, 16.0), std::pow(21.0, 16.0) * 1e-9);
  }
}

TEST(NetEval, RefinementConsistency) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Formula body = testsupport::random_formula(rng, 2, 1, false);
    const EvalResult coarse = net_eval(body, {1}, 1, Rational(1, 4));
    const EvalResult fine = net_eval(body, {1}, 1, Rational(1, 8));
    EXPECT_GE(fine.value, coarse.value - 1e-12);
    EXPECT_GE(fine.value, coarse.value - coarse.gap);
  }
}

// The net value brackets a dense independent sample of the unit disk. The
// sample sits within 1/100 of every disk point, so the true sup is at most
// best + L/100.
TEST(NetEval, GapBracketsDenseSample) {
  const Formula body = parse_formula("norm2(x1 x1 + [0, 1/2] x1') -. trRe(x1)");
  const EvalResult r = net_eval(body, {1}, 1, Rational(1, 8));
  double best = -1e300;
  for (int a = 0; a <= 400; ++a)
    for (int b = 0; b <= 400; ++b) {
      Complex z(-1 + a / 200.0, -1 + b / 200.0);
      if (std::abs(z) > 1) continue;
      MatrixTuple t(1);
      t.set(1, ComplexMatrix::Constant(1, 1, z));
      best = std::max(best, eval_qf(body, t));
    }
  EXPECT_LE(r.value, best + formula_lipschitz(body) / 100.0);
  EXPECT_GE(r.value + r.gap, best - 1e-12);
}

TEST(EvalSentence, Dispatch) {
  const OptimizerConfig cfg = config(2, 7);
  const EvalResult qf = eval_sentence(Sentence(parse_formula("half(trRe(1))")), cfg);
  EXPECT_EQ(qf.bound_kind, BoundKind::Exact);
  EXPECT_EQ(qf.value, 0.5);

  const EvalResult u = eval_sentence(Sentence(parse_formula("sup x1 . trRe(x1)")), cfg);
  EXPECT_EQ(u.bound_kind, BoundKind::LowerBoundOfSup);

  const EvalResult e = eval_sentence(Sentence(parse_formula("inf x1 . norm2(x1 - x1')")), cfg);
  EXPECT_EQ(e.bound_kind, BoundKind::UpperBoundOfInf);
  EXPECT_LE(e.value, 1e-6);

  try {
    eval_sentence(Sentence(parse_formula("sup x1 . inf x2 . norm2(x1 - x2)")), cfg);
    FAIL();
  } catch (const Unsupported& ex) {
    EXPECT_EQ(ex.code(), "unsupported-classification");
  }
}
