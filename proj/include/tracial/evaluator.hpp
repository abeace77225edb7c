#pragma once

// Evaluation of formulas at matrix assignments and one-sided estimates of
// quantified sentences over M_p(C): seeded multi-start hill climbing (certified
// lower bounds of sup / upper bounds of inf) and exhaustive grid nets (values
// with an explicit gap).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/formula.hpp"
#include "tracial/matrix.hpp"
#include "tracial/nets.hpp"
#include "tracial/parallel.hpp"
#include "tracial/random.hpp"
#include "tracial/terms.hpp"

namespace tracial {

// ---------------------------------------------------------------------------
// Quantifier-free evaluation

inline ComplexMatrix eval_term(const Term& t, const MatrixTuple& a) {
  using K = Term::Kind;
  const int p = a.dim();
  if (p < 1) throw ValidationError("dimension-mismatch", "assignment has no dimension");
  switch (t.kind()) {
    case K::Var:
      return a.at(t.var_index());
    case K::One:
      return ComplexMatrix::Identity(p, p);
    case K::Zero:
      return ComplexMatrix::Zero(p, p);
    case K::Adjoint:
      return eval_term(t.child(), a).adjoint();
    case K::Sum:
      return eval_term(t.child(0), a) + eval_term(t.child(1), a);
    case K::Prod:
      return eval_term(t.child(0), a) * eval_term(t.child(1), a);
    case K::Scale:
      return t.coefficient().to_complex() * eval_term(t.child(), a);
  }
  return {};
}

/// Value of a quantifier-free formula in M_p(C) with tau = Tr/p.
inline double eval_qf(const Formula& f, const MatrixTuple& a) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Norm2:
      return two_norm(eval_term(f.term(), a));
    case K::TraceRe:
      return normalized_trace(eval_term(f.term(), a)).real();
    case K::TraceIm:
      return normalized_trace(eval_term(f.term(), a)).imag();
    case K::Const:
      return to_double(f.rational());
    case K::Add:
      return eval_qf(f.child(0), a) + eval_qf(f.child(1), a);
    case K::Mul:
      return eval_qf(f.child(0), a) * eval_qf(f.child(1), a);
    case K::Scale:
      return to_double(f.rational()) * eval_qf(f.child(), a);
    case K::DotMinus:
      return dotminus(eval_qf(f.child(0), a), eval_qf(f.child(1), a));
    case K::Max:
      return std::max(eval_qf(f.child(0), a), eval_qf(f.child(1), a));
    case K::Min:
      return std::min(eval_qf(f.child(0), a), eval_qf(f.child(1), a));
    case K::Half:
      return eval_qf(f.child(), a) / 2.0;
    case K::Sup:
    case K::Inf:
      throw Unsupported("eval_qf called on a quantified formula");
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Results and configuration

enum class BoundKind { Exact, LowerBoundOfSup, UpperBoundOfInf, NetBoundWithGap };

inline std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Exact: return "exact";
    case BoundKind::LowerBoundOfSup: return "lower-bound-of-sup";
    case BoundKind::UpperBoundOfInf: return "upper-bound-of-inf";
    case BoundKind::NetBoundWithGap: return "net-bound-with-gap";
  }
  return {};
}

struct Diagnostics {
  std::uint64_t iterations = 0;   // proposals evaluated across all branches
  std::uint64_t accepted = 0;     // accepted proposals
  std::uint64_t restarts = 0;     // branches run (random + warm starts)
  std::uint64_t evaluations = 0;  // objective evaluations (net points for nets)
  std::uint64_t seed = 0;
  std::int64_t best_branch = -1;
};

struct EvalResult {
  double value = 0.0;
  BoundKind bound_kind = BoundKind::Exact;
  double gap = 0.0;  // only meaningful for NetBoundWithGap
  std::optional<MatrixTuple> certificate;
  Diagnostics diagnostics;
  std::optional<NetSpec> net;
};

struct OptimizerConfig {
  int p = 2;
  int restarts = 8;
  int max_iterations = 2000;
  double initial_step = 0.5;
  /// Step multiplier after a rejected proposal; an accepted one divides the
  /// step by decay^4 (a one-in-five success rule), capped at initial_step.
  double decay = 0.9;
  double min_step = 1e-9;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Extra branches started from these tuples (after the random restarts).
  std::vector<MatrixTuple> warm_starts;

  void validate() const {
    auto bad = [](const std::string& what) { throw ValidationError("config-invalid", what); };
    if (p < 1) bad("dimension p must be >= 1");
    if (restarts < 1) bad("restarts must be >= 1");
    if (max_iterations < 0) bad("max_iterations must be >= 0");
    if (!(initial_step > 0.0) || !std::isfinite(initial_step)) bad("initial step must be positive");
    if (!(decay > 0.0 && decay < 1.0)) bad("decay must lie in (0, 1)");
    if (!(min_step > 0.0) || min_step > initial_step) bad("min_step must lie in (0, initial_step]");
    if (threads < 1) bad("threads must be >= 1");
    for (const auto& w : warm_starts)
      if (w.dim() != p) bad("warm start dimension differs from p");
  }
};

/// Optional structure of the search domain. With groups, proposals also
/// include conjugating every variable of one group by a random near-identity
/// unitary, and starts can be random PVM tuples (one PVM per group).
struct SearchSpace {
  enum class Start { RandomContraction, RandomPVM };
  std::vector<std::vector<int>> groups;
  Start start = Start::RandomContraction;
};

// ---------------------------------------------------------------------------
// Hill climbing engine

namespace detail {

/// exp(i s H) for Hermitian H, via its eigendecomposition.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double s) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::polar(1.0, s * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline MatrixTuple random_start(const std::vector<int>& vars, const OptimizerConfig& cfg, const SearchSpace& space,
                                Rng& rng) {
  if (space.start == SearchSpace::Start::RandomPVM && !space.groups.empty()) {
    MatrixTuple t(cfg.p);
    for (const auto& g : space.groups) {
      const int m = static_cast<int>(g.size());
      auto pvm = pvm_from_unitary(random_unitary(cfg.p, rng), random_composition(cfg.p, m, rng));
      for (int i = 0; i < m; ++i) t.set(g[i], pvm[i]);
    }
    for (int v : vars)
      if (!t.contains(v)) t.set(v, random_contraction(cfg.p, rng));
    return t;
  }
  return random_contraction_tuple(cfg.p, vars, rng);
}

struct Branch {
  double value = -std::numeric_limits<double>::infinity();
  std::optional<MatrixTuple> best;
  std::uint64_t iterations = 0;
  std::uint64_t accepted = 0;
};

template <typename Objective>
Branch climb(Objective& objective, MatrixTuple current, const std::vector<int>& vars, const OptimizerConfig& cfg,
             const SearchSpace& space, Rng& rng) {
  Branch b;
  double value = objective(current);
  double step = cfg.initial_step;
  const double grow = std::pow(cfg.decay, -4.0);
  const int p = cfg.p;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    MatrixTuple proposal = current;
    const bool conjugate = !space.groups.empty() && uniform01(rng) < 0.5;
    if (conjugate) {
      const auto& g = space.groups[uniform_index(rng, space.groups.size())];
      ComplexMatrix h = random_hermitian(p, rng);
      const double hn = two_norm(h);
      const ComplexMatrix u = unitary_exp(hn > 0.0 ? ComplexMatrix(h / hn) : h, step);
      for (int v : g) proposal.set(v, u * current.at(v) * u.adjoint());
    } else {
      const int v = vars[uniform_index(rng, vars.size())];
      const ComplexMatrix& x = current.at(v);
      // Half the moves use full Gaussian noise; the rest draw a complex
      // Gaussian along x itself or along one singular pair u v* of x, which
      // lets a single singular value move while the clipped ones stay put.
      const double kind = uniform01(rng);
      ComplexMatrix noise;
      if (kind < 0.5 || p == 1) {
        noise = random_gaussian(p, rng) * (step / std::sqrt(static_cast<double>(p)));
      } else {
        const Complex xi = Complex(standard_normal(rng), standard_normal(rng)) * (step / std::sqrt(2.0));
        if (kind < 0.75) {
          noise = xi * x;
        } else {
          Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const Eigen::Index k = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(p)));
          noise = xi * svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
        }
      }
      proposal.set(v, project_to_contraction(x + noise));
    }
    ++b.iterations;
    const double candidate = objective(proposal);
    if (candidate > value) {
      value = candidate;
      current = std::move(proposal);
      ++b.accepted;
      step = std::min(step * grow, cfg.initial_step);
    } else {
      step *= cfg.decay;
      if (step < cfg.min_step) step = cfg.initial_step;
    }
  }
  b.value = value;
  b.best = std::move(current);
  return b;
}

}  // namespace detail

/// Maximizes objective(MatrixTuple) over contraction tuples of dimension cfg.p
/// binding `vars`. Random restart k uses seed derive_seed(cfg.seed, k) and
/// warm start w uses derive_seed(cfg.seed, w, 1). The best branch wins, ties going to
/// the lowest index, so the result does not depend on cfg.threads. The value
/// never decreases when restarts or iterations grow.
template <typename Objective>
EvalResult maximize(Objective objective, const std::vector<int>& vars, const OptimizerConfig& cfg,
                    const SearchSpace& space = {}) {
  cfg.validate();
  if (vars.empty()) throw InvalidArgument("maximize needs at least one variable");
  const std::size_t branches = static_cast<std::size_t>(cfg.restarts) + cfg.warm_starts.size();
  std::vector<detail::Branch> results(branches);
  parallel_for(branches, cfg.threads, [&](std::size_t k) {
    const bool warm = k >= static_cast<std::size_t>(cfg.restarts);
    const std::size_t w = k - static_cast<std::size_t>(cfg.restarts);
    Rng rng(warm ? derive_seed(cfg.seed, w, 1) : derive_seed(cfg.seed, k));
    MatrixTuple start = warm ? cfg.warm_starts[w] : detail::random_start(vars, cfg, space, rng);
    for (int v : vars)
      if (!start.contains(v)) start.set(v, random_contraction(cfg.p, rng));
    Objective local = objective;
    results[k] = detail::climb(local, std::move(start), vars, cfg, space, rng);
  });
  EvalResult out;
  out.bound_kind = BoundKind::LowerBoundOfSup;
  out.diagnostics.seed = cfg.seed;
  out.diagnostics.restarts = branches;
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < branches; ++k) {
    out.diagnostics.iterations += results[k].iterations;
    out.diagnostics.accepted += results[k].accepted;
    out.diagnostics.evaluations += results[k].iterations + 1;
    if (results[k].value > out.value) {
      out.value = results[k].value;
      out.certificate = results[k].best;
      out.diagnostics.best_branch = static_cast<std::int64_t>(k);
    }
  }
  return out;
}

inline void require_body(const Formula& body, const std::vector<int>& vars) {
  if (!body.is_quantifier_free()) throw Unsupported("optimizer body must be quantifier-free");
  for (int v : body.free_vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw ValidationError("unbound-variable", "body variable x" + std::to_string(v) + " is not quantified");
}

/// Certified lower bound of sup_{vars} body over contraction tuples in M_p(C);
/// the certificate reproduces the value under eval_qf.
inline EvalResult sup_lower_bound(const Formula& body, const std::vector<int>& vars, const OptimizerConfig& cfg,
                                  const SearchSpace& space = {}) {
  require_body(body, vars);
  auto objective = [&body](const MatrixTuple& t) { return eval_qf(body, t); };
  EvalResult r = maximize(objective, vars, cfg, space);
  r.value = eval_qf(body, *r.certificate);
  return r;
}

/// Certified upper bound of inf_{vars} body, by maximizing -body.
inline EvalResult inf_upper_bound(const Formula& body, const std::vector<int>& vars, const OptimizerConfig& cfg,
                                  const SearchSpace& space = {}) {
  require_body(body, vars);
  auto objective = [&body](const MatrixTuple& t) { return -eval_qf(body, t); };
  EvalResult r = maximize(objective, vars, cfg, space);
  r.value = eval_qf(body, *r.certificate);
  r.bound_kind = BoundKind::UpperBoundOfInf;
  return r;
}

// ---------------------------------------------------------------------------
// Grid nets

struct NetEvalOptions {
  std::uint64_t budget = 1'000'000;
  int threads = 1;
  /// Receives (point index, body value) for every net point, in index order.
  std::function<void(std::uint64_t, double)> on_point;
};

/// max of body over the matrix-ball grid net, plus the gap
/// L * covering_radius where L is the body's structural Lipschitz constant,
/// so that value <= sup_{M_p} body <= value + gap.
inline EvalResult net_eval(const Formula& body, const std::vector<int>& vars, int p, const Rational& mesh,
                           const NetEvalOptions& opts = {}) {
  require_body(body, vars);
  if (vars.empty()) throw InvalidArgument("net_eval needs at least one variable");
  const MatrixBallGrid grid(p, static_cast<int>(vars.size()), mesh, opts.budget);
  const Modulus modulus = modulus_of_continuity(body);

  const std::uint64_t total = grid.size();
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, 64));
  std::vector<double> chunk_best(chunks, -std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> chunk_arg(chunks, 0);
  std::vector<double> values(opts.on_point ? total : 0);
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double v = eval_qf(body, grid.point(i, vars));
      if (opts.on_point) values[i] = v;
      if (v > chunk_best[c]) {
        chunk_best[c] = v;
        chunk_arg[c] = i;
      }
    }
  });
  if (opts.on_point)
    for (std::uint64_t i = 0; i < total; ++i) opts.on_point(i, values[i]);

  EvalResult out;
  out.bound_kind = BoundKind::NetBoundWithGap;
  out.value = -std::numeric_limits<double>::infinity();
  std::uint64_t arg = 0;
  for (std::size_t c = 0; c < chunks; ++c)
    if (chunk_best[c] > out.value) {
      out.value = chunk_best[c];
      arg = chunk_arg[c];
    }
  out.certificate = grid.point(arg, vars);
  out.gap = modulus.error_at(grid.covering_radius());
  out.net = grid.spec();
  out.diagnostics.evaluations = total;
  out.diagnostics.best_branch = static_cast<std::int64_t>(arg);
  return out;
}

// ---------------------------------------------------------------------------
// Sentences

/// Quantifier-free sentences are evaluated exactly in M_p (p = cfg.p),
/// universal ones get a certified lower bound, existential ones a certified
/// upper bound. Mixed prefixes are rejected.
inline EvalResult eval_sentence(const Sentence& s, const OptimizerConfig& cfg, const SearchSpace& space = {}) {
  switch (s.classification()) {
    case Classification::QuantifierFree: {
      cfg.validate();
      EvalResult r;
      r.value = eval_qf(s.formula(), MatrixTuple(cfg.p));
      r.bound_kind = BoundKind::Exact;
      r.diagnostics.seed = cfg.seed;
      return r;
    }
    case Classification::Universal:
      return sup_lower_bound(s.body(), s.bound_vars(), cfg, space);
    case Classification::Existential:
      return inf_upper_bound(s.body(), s.bound_vars(), cfg, space);
    case Classification::Mixed:
      break;
  }
  throw Unsupported("sentence mixes quantifiers or is not in prenex form", "unsupported-classification");
}

}  // namespace tracial
