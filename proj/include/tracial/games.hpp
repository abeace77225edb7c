#pragma once

// Synchronous nonlocal games: the PVM formula, the game formula, lower
// bounds on the synchronous value from finite-dimensional PVM strategies,
// rounding near-PVMs to exact PVMs, and the classical brute-force oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/evaluator.hpp"
#include "tracial/formula.hpp"
#include "tracial/matrix.hpp"
#include "tracial/parallel.hpp"
#include "tracial/random.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"

namespace tracial {

/// n questions, m answers, a rational distribution mu on question pairs and a
/// decision table D(v, w, i, j).
class NonlocalGame {
 public:
  NonlocalGame() = default;
  NonlocalGame(int n, int m) : n_(n), m_(m) {
    if (n < 1 || m < 1) throw InvalidArgument("games need n >= 1 and m >= 1");
    mu_.assign(static_cast<std::size_t>(n) * n, Rational(0));
    d_.assign(static_cast<std::size_t>(n) * n * m * m, 0);
  }

  int questions() const { return n_; }
  int answers() const { return m_; }

  const Rational& mu(int v, int w) const { return mu_.at(static_cast<std::size_t>(v) * n_ + w); }
  void set_mu(int v, int w, Rational q) {
    if (q < 0) throw ValidationError("invalid-game", "mu entries must be non-negative");
    mu_.at(static_cast<std::size_t>(v) * n_ + w) = std::move(q);
  }

  bool wins(int v, int w, int i, int j) const { return d_.at(d_index(v, w, i, j)) != 0; }
  void set_wins(int v, int w, int i, int j, bool ok) { d_.at(d_index(v, w, i, j)) = ok ? 1 : 0; }

  /// Throws invalid-game unless mu is a probability distribution exactly.
  void validate() const {
    if (n_ < 1 || m_ < 1) throw ValidationError("invalid-game", "game has no questions or answers");
    Rational total(0);
    for (const Rational& q : mu_) {
      if (q < 0) throw ValidationError("invalid-game", "mu entries must be non-negative");
      total += q;
    }
    if (total != 1) throw ValidationError("invalid-game", "mu sums to " + to_string(total) + ", not 1");
  }

  bool proper() const {
    return std::all_of(mu_.begin(), mu_.end(), [](const Rational& q) { return q > 0; });
  }

  bool synchronous() const {
    for (int v = 0; v < n_; ++v)
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          if (i != j && wins(v, v, i, j)) return false;
    return true;
  }

  std::string name;

 private:
  std::size_t d_index(int v, int w, int i, int j) const {
    if (v < 0 || v >= n_ || w < 0 || w >= n_ || i < 0 || i >= m_ || j < 0 || j >= m_)
      throw InvalidArgument("game index out of range");
    return ((static_cast<std::size_t>(v) * n_ + w) * m_ + i) * m_ + j;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<Rational> mu_;
  std::vector<std::uint8_t> d_;
};

// ---------------------------------------------------------------------------
// Formulas

/// max( max ||x^2 - x||_2, max ||x* - x||_2, max_v ||sum_i x_{v,i} - 1||_2 )
/// over the grouped variables x_{v,i} = grouped_var(v, i, m).
inline Formula build_pvm_formula(int n, int m) {
  if (n < 1 || m < 1) throw InvalidArgument("build_pvm_formula needs n, m >= 1");
  const Term minus_one = Term::scale(ComplexRational(Rational(-1)), Term::one());
  auto neg = [](const Term& t) { return Term::scale(ComplexRational(Rational(-1)), t); };
  auto fmax = [](const Formula& a, const Formula& b) { return Formula::max(a, b); };
  std::vector<Formula> idem, self_adj, complete;
  for (int v = 0; v < n; ++v) {
    std::optional<Term> total;
    for (int i = 0; i < m; ++i) {
      const Term x = Term::var(grouped_var(v, i, m));
      idem.push_back(Formula::norm2(Term::sum(Term::prod(x, x), neg(x))));
      self_adj.push_back(Formula::norm2(Term::sum(Term::adjoint(x), neg(x))));
      total = total ? Term::sum(*total, x) : x;
    }
    complete.push_back(Formula::norm2(Term::sum(*total, minus_one)));
  }
  return Formula::max(Formula::max(fold(idem, fmax), fold(self_adj, fmax)), fold(complete, fmax));
}

/// sum_{v,w} mu(v,w) sum_{i,j : D} Re tau(x_{v,i} x_{w,j}); one scaled
/// TraceRe atom per winning (v, w, i, j) with mu(v, w) > 0.
inline Formula build_game_formula(const NonlocalGame& g) {
  const int n = g.questions(), m = g.answers();
  std::vector<Formula> atoms;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (g.mu(v, w) == 0) continue;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (g.wins(v, w, i, j))
            atoms.push_back(Formula::scale(
                g.mu(v, w), Formula::trace_re(Term::prod(Term::var(grouped_var(v, i, m)),
                                                         Term::var(grouped_var(w, j, m))))));
    }
  if (atoms.empty()) return Formula::constant(0);
  return fold(atoms, [](const Formula& a, const Formula& b) { return Formula::add(a, b); });
}

/// Dense form of the game formula: weights W[(v,i),(w,j)] = mu(v,w) [D].
class GameKernel {
 public:
  explicit GameKernel(const NonlocalGame& g) : n_(g.questions()), m_(g.answers()) {
    const int k = n_ * m_;
    w_.assign(static_cast<std::size_t>(k) * k, 0.0);
    for (int v = 0; v < n_; ++v)
      for (int w = 0; w < n_; ++w) {
        const double mu = to_double(g.mu(v, w));
        for (int i = 0; i < m_; ++i)
          for (int j = 0; j < m_; ++j)
            if (g.wins(v, w, i, j)) w_[static_cast<std::size_t>(v * m_ + i) * k + (w * m_ + j)] = mu;
      }
  }

  /// Game formula value at arbitrary (not necessarily PVM) matrices.
  double operator()(const std::vector<const ComplexMatrix*>& x) const {
    const int k = n_ * m_;
    const double p = static_cast<double>(x.front()->rows());
    double total = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const double wab = w_[static_cast<std::size_t>(a) * k + b];
        if (wab == 0.0) continue;
        total += wab * x[a]->cwiseProduct(x[b]->transpose()).sum().real();
      }
    return total / p;
  }

  double operator()(const PVMTuple& t) const {
    std::vector<const ComplexMatrix*> x;
    for (const auto& g : t.groups)
      for (const auto& a : g) x.push_back(&a);
    return (*this)(x);
  }

  double operator()(const MatrixTuple& t) const {
    std::vector<const ComplexMatrix*> x;
    for (int v = 0; v < n_; ++v)
      for (int i = 0; i < m_; ++i) x.push_back(&t.at(grouped_var(v, i, m_)));
    return (*this)(x);
  }

 private:
  int n_, m_;
  std::vector<double> w_;
};

// ---------------------------------------------------------------------------
// Classical oracle

struct DeterministicResult {
  Rational value{0};
  std::vector<int> assignment;  // answer per question
};

/// Exact maximum over all m^n deterministic answer assignments.
inline DeterministicResult deterministic_value(const NonlocalGame& g, std::uint64_t budget = 1u << 22) {
  g.validate();
  const int n = g.questions(), m = g.answers();
  std::uint64_t total = 1;
  for (int v = 0; v < n; ++v) {
    if (total > budget / static_cast<std::uint64_t>(m))
      throw BudgetExceeded(std::pow(double(m), double(n)), budget,
                           "deterministic_value needs " + std::to_string(std::pow(double(m), double(n))) +
                               " assignments, budget is " + std::to_string(budget));
    total *= static_cast<std::uint64_t>(m);
  }

  // Integer weights over a common denominator keep the search exact.
  using boost::multiprecision::cpp_int;
  cpp_int den = 1;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(g.mu(v, w)));
  std::vector<cpp_int> weight(static_cast<std::size_t>(n) * n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      const Rational& q = g.mu(v, w);
      weight[v * n + w] = boost::multiprecision::numerator(q) * (den / boost::multiprecision::denominator(q));
    }
  const bool small = den < (cpp_int(1) << 62);
  std::vector<std::int64_t> w64;
  if (small)
    for (const auto& x : weight) w64.push_back(x.convert_to<std::int64_t>());

  std::vector<int> c(static_cast<std::size_t>(n), 0);
  DeterministicResult best;
  cpp_int best_score = -1;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    cpp_int score;
    if (small) {
      std::int64_t s = 0;
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
          if (g.wins(v, w, c[v], c[w])) s += w64[v * n + w];
      score = s;
    } else {
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
          if (g.wins(v, w, c[v], c[w])) score += weight[v * n + w];
    }
    if (score > best_score) {
      best_score = score;
      best.assignment = c;
    }
    for (int v = n - 1; v >= 0; --v) {
      if (++c[v] < m) break;
      c[v] = 0;
    }
  }
  best.value = Rational(best_score) / Rational(den);
  return best;
}

/// The p = 1 PVM tuple of a deterministic assignment, embedded in M_p.
inline PVMTuple deterministic_pvm(const std::vector<int>& assignment, int m, int p = 1) {
  PVMTuple t{p, {}};
  for (int c : assignment) {
    std::vector<ComplexMatrix> g(static_cast<std::size_t>(m), ComplexMatrix::Zero(p, p));
    g.at(static_cast<std::size_t>(c)) = ComplexMatrix::Identity(p, p);
    t.groups.push_back(std::move(g));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Correlations

/// p(i, j | v, w) = Re tau(x_{v,i} x_{w,j}) for a PVM tuple.
struct SynchronousCorrelation {
  int n = 0;
  int m = 0;
  std::vector<double> values;

  double operator()(int v, int w, int i, int j) const {
    return values.at(((static_cast<std::size_t>(v) * n + w) * m + i) * m + j);
  }

  /// max over v and i != j of p(i, j | v, v).
  double synchronicity_residual() const {
    double r = 0.0;
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j) r = std::max(r, (*this)(v, v, i, j));
    return r;
  }

  /// max over (v, w) of |sum_{i,j} p(i, j | v, w) - 1|.
  double normalization_error() const {
    double r = 0.0;
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) s += (*this)(v, w, i, j);
        r = std::max(r, std::abs(s - 1.0));
      }
    return r;
  }
};

inline SynchronousCorrelation correlation_from_pvms(const PVMTuple& t) {
  validate_pvm(t, 1e-8);
  SynchronousCorrelation c;
  c.n = t.questions();
  c.m = t.answers();
  c.values.resize(static_cast<std::size_t>(c.n) * c.n * c.m * c.m);
  std::size_t k = 0;
  for (int v = 0; v < c.n; ++v)
    for (int w = 0; w < c.n; ++w)
      for (int i = 0; i < c.m; ++i)
        for (int j = 0; j < c.m; ++j)
          c.values[k++] = normalized_trace(t.groups[v][i] * t.groups[w][j]).real();
  return c;
}

/// sum mu(v,w) D(v,w,i,j) p(i,j|v,w).
inline double game_value(const NonlocalGame& g, const SynchronousCorrelation& c) {
  if (c.n != g.questions() || c.m != g.answers()) throw ValidationError("dimension-mismatch", "correlation shape");
  double total = 0.0;
  for (int v = 0; v < c.n; ++v)
    for (int w = 0; w < c.n; ++w) {
      const double mu = to_double(g.mu(v, w));
      for (int i = 0; i < c.m; ++i)
        for (int j = 0; j < c.m; ++j)
          if (g.wins(v, w, i, j)) total += mu * c(v, w, i, j);
    }
  return total;
}

// ---------------------------------------------------------------------------
// Rounding

struct RoundingResult {
  PVMTuple pvm;
  double phi = 0.0;       // PVM formula value at the input
  double distance = 0.0;  // l1-of-2-norm distance between input and output
  double constant = 0.0;  // distance / phi, 0 when phi == 0
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<ComplexMatrix> round_group(const std::vector<ComplexMatrix>& x, int v,
                                              std::vector<std::string>& warnings) {
  const int m = static_cast<int>(x.size());
  const Eigen::Index p = x.front().rows();
  std::vector<ComplexMatrix> y;
  ComplexMatrix s = ComplexMatrix::Zero(p, p);
  for (int i = 0; i < m; ++i) {
    y.push_back((x[i] + x[i].adjoint()) / 2.0);
    s += (i + 1 + 1.0 / 7.0) * y.back();
  }
  s = (s + s.adjoint()) / 2.0;
  const HermitianEig eig = hermitian_eig(s);
  std::vector<int> owner(static_cast<std::size_t>(p));
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(m), ComplexMatrix::Zero(p, p));
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto u = eig.vectors.col(k);
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double score = (u.adjoint() * y[i] * u)(0, 0).real();
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    owner[k] = best;
    out[best] += u * u.adjoint();
  }
  for (Eigen::Index a = 0; a + 1 < p; ++a)
    if (std::abs(eig.values[a] - eig.values[a + 1]) < 1e-8 && owner[a] != owner[a + 1]) {
      warnings.push_back("degenerate-spectrum: group " + std::to_string(v) +
                         " has a repeated eigenvalue split across answers");
      break;
    }
  return out;
}

}  // namespace detail

/// Rounds each group of a near-PVM tuple to an exact PVM: Hermitian parts
/// y_i, eigenvectors of S = sum_i (i + 1/7) y_i (1-based i), each eigenvector
/// assigned to argmax_i <y_i u, u> (lowest index on ties), projections summed.
/// Throws too-far when the PVM formula exceeds tol at the input.
inline RoundingResult round_to_pvm(const PVMTuple& a, double tol) {
  if (a.dim < 1 || a.groups.empty() || a.answers() < 1) throw InvalidArgument("round_to_pvm needs a grouped tuple");
  RoundingResult r;
  r.phi = pvm_residuals(a).max();
  if (!(r.phi <= tol))
    throw ValidationError("too-far", "PVM formula value " + std::to_string(r.phi) + " exceeds tolerance " +
                                         std::to_string(tol));
  r.pvm.dim = a.dim;
  for (std::size_t v = 0; v < a.groups.size(); ++v) {
    if (a.groups[v].size() != a.groups.front().size()) throw InvalidArgument("groups must have equal size");
    r.pvm.groups.push_back(detail::round_group(a.groups[v], static_cast<int>(v), r.warnings));
    for (std::size_t i = 0; i < a.groups[v].size(); ++i)
      r.distance += two_norm(r.pvm.groups[v][i] - a.groups[v][i]);
  }
  validate_pvm(r.pvm, 1e-10);
  r.constant = r.phi > 0.0 ? r.distance / r.phi : 0.0;
  return r;
}

inline RoundingResult round_to_pvm(const MatrixTuple& a, int n, int m, double tol) {
  return round_to_pvm(group_tuple(a, n, m), tol);
}

// ---------------------------------------------------------------------------
// Constrained optimization over PVM tuples

struct GameValueReport {
  std::string game_id;
  int p = 1;
  double lower_bound = 0.0;
  PVMTuple certificate;
  std::optional<Rational> classical_value;
  double synchronicity_residual = 0.0;
  std::uint64_t patterns = 0;
  bool exhaustive_patterns = false;
  Diagnostics diagnostics;
};

struct GameSearchOptions {
  /// Joint rank patterns are enumerated when there are at most this many.
  std::uint64_t pattern_limit = 512;
  /// The classical oracle runs (and seeds a branch) when m^n is at most this.
  std::uint64_t classical_budget = 1u << 16;
};

namespace detail {

inline bool conjugation_invariant(const PVMTuple& t) {
  for (const auto& g : t.groups)
    for (const auto& a : g) {
      const double tr = normalized_trace(a).real();
      if (tr > 1e-12 && tr < 1.0 - 1e-12) return false;
    }
  return true;
}

struct PVMBranch {
  double value = -std::numeric_limits<double>::infinity();
  PVMTuple best;
  std::uint64_t iterations = 0;
  std::uint64_t accepted = 0;
};

/// Hill climb over unitary conjugations of single groups. Every 64 steps the
/// current tuple is re-validated and, if it has drifted, re-rounded.
inline PVMBranch climb_pvm(const GameKernel& kernel, PVMTuple current, const OptimizerConfig& cfg, Rng& rng,
                           double ceiling) {
  PVMBranch b;
  double value = kernel(current);
  if (current.dim > 1 && !conjugation_invariant(current)) {
    double step = cfg.initial_step;
    const double grow = std::pow(cfg.decay, -4.0);
    const int p = current.dim;
    for (int it = 0; it < cfg.max_iterations && value < ceiling; ++it) {
      if (it % 64 == 63 && pvm_residuals(current).max() > 1e-11) {
        std::vector<std::string> ignored;
        for (std::size_t v = 0; v < current.groups.size(); ++v)
          current.groups[v] = round_group(current.groups[v], static_cast<int>(v), ignored);
        value = kernel(current);
      }
      const std::size_t v = uniform_index(rng, current.groups.size());
      ComplexMatrix h = random_hermitian(p, rng);
      const double hn = two_norm(h);
      if (hn > 0.0) h /= hn;
      const ComplexMatrix u = unitary_exp(h, step);
      PVMTuple proposal = current;
      for (auto& a : proposal.groups[v]) a = u * a * u.adjoint();
      ++b.iterations;
      const double candidate = kernel(proposal);
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
  }
  b.value = value;
  b.best = std::move(current);
  return b;
}

inline std::vector<std::vector<std::vector<int>>> rank_patterns(int n, int m, int p, const GameSearchOptions& opts,
                                                                std::uint64_t seed, bool& exhaustive) {
  const std::uint64_t per_group = composition_count(p, m);
  std::uint64_t joint = 1;
  exhaustive = true;
  for (int v = 0; v < n && exhaustive; ++v) {
    if (joint > opts.pattern_limit / std::max<std::uint64_t>(per_group, 1)) exhaustive = false;
    joint *= per_group;
  }
  if (exhaustive && joint > opts.pattern_limit) exhaustive = false;

  std::vector<std::vector<std::vector<int>>> out;
  if (exhaustive) {
    const auto comps = all_compositions(p, m);
    for (std::uint64_t k = 0; k < joint; ++k) {
      std::vector<std::vector<int>> pattern(static_cast<std::size_t>(n));
      std::uint64_t idx = k;
      for (int v = n - 1; v >= 0; --v) {
        pattern[v] = comps[idx % comps.size()];
        idx /= comps.size();
      }
      out.push_back(std::move(pattern));
    }
  } else {
    for (std::uint64_t k = 0; k < opts.pattern_limit; ++k) {
      Rng rng(derive_seed(seed, k, 2));
      std::vector<std::vector<int>> pattern;
      for (int v = 0; v < n; ++v) pattern.push_back(random_composition(p, m, rng));
      out.push_back(std::move(pattern));
    }
  }
  return out;
}

}  // namespace detail

/// Best value of the game formula found over PVM tuples in M_p. Branches:
/// every rank pattern (exhaustive when at most opts.pattern_limit, otherwise
/// that many seeded samples) with max(1, restarts / patterns) random unitary
/// starts each, then the embedded classical optimum when the oracle is within
/// budget, then cfg.warm_starts (grouped PVM tuples). The reported bound is
/// the game formula re-evaluated at the certificate.
inline GameValueReport synchronous_value_lower_bound(const NonlocalGame& g, int p, OptimizerConfig cfg,
                                                     const GameSearchOptions& opts = {}) {
  g.validate();
  cfg.p = p;
  cfg.validate();
  const int n = g.questions(), m = g.answers();
  const GameKernel kernel(g);

  GameValueReport report;
  report.game_id = g.name;
  report.p = p;

  std::optional<PVMTuple> classical_start;
  if (std::pow(double(m), double(n)) <= double(opts.classical_budget)) {
    const DeterministicResult det = deterministic_value(g, opts.classical_budget);
    report.classical_value = det.value;
    classical_start = deterministic_pvm(det.assignment, m, p);
  }

  bool exhaustive = false;
  const auto patterns = detail::rank_patterns(n, m, p, opts, cfg.seed, exhaustive);
  report.patterns = patterns.size();
  report.exhaustive_patterns = exhaustive;
  const std::size_t runs = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.restarts) / patterns.size());

  std::vector<PVMTuple> extra;
  if (classical_start) extra.push_back(*classical_start);
  for (const auto& w : cfg.warm_starts) {
    PVMTuple t = group_tuple(w, n, m);
    validate_pvm(t, 1e-8);
    extra.push_back(std::move(t));
  }

  const std::size_t random_branches = patterns.size() * runs;
  const std::size_t branches = random_branches + extra.size();
  std::vector<detail::PVMBranch> results(branches);
  parallel_for(branches, cfg.threads, [&](std::size_t k) {
    if (k < random_branches) {
      const std::size_t pat = k / runs, run = k % runs;
      Rng rng(derive_seed(derive_seed(cfg.seed, pat, 3), run));
      PVMTuple start{p, {}};
      for (int v = 0; v < n; ++v) start.groups.push_back(pvm_from_unitary(random_unitary(p, rng), patterns[pat][v]));
      results[k] = detail::climb_pvm(kernel, std::move(start), cfg, rng, 1.0 - 1e-13);
    } else {
      const std::size_t e = k - random_branches;
      Rng rng(derive_seed(cfg.seed, e, 4));
      results[k] = detail::climb_pvm(kernel, extra[e], cfg, rng, 1.0 - 1e-13);
    }
  });

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < branches; ++k) {
    report.diagnostics.iterations += results[k].iterations;
    report.diagnostics.accepted += results[k].accepted;
    report.diagnostics.evaluations += results[k].iterations + 1;
    if (results[k].value > best) {
      best = results[k].value;
      report.certificate = results[k].best;
      report.diagnostics.best_branch = static_cast<std::int64_t>(k);
    }
  }
  report.diagnostics.restarts = branches;
  report.diagnostics.seed = cfg.seed;
  validate_pvm(report.certificate, 1e-8);
  report.lower_bound = eval_qf(build_game_formula(g), to_matrix_tuple(report.certificate));
  report.synchronicity_residual = correlation_from_pvms(report.certificate).synchronicity_residual();
  return report;
}

// ---------------------------------------------------------------------------
// Penalized relaxation

struct RelaxedGameResult {
  EvalResult relaxed;      // sup of psi -. beta phi, with certificate
  RoundingResult rounding; // certificate rounded to an exact PVM
  double rounded_value = 0.0;
};

/// Lower bound of sup_x (psi(x) -. beta phi(x)) over contraction tuples in
/// M_p, searched from random PVM starts with both entrywise and group
/// conjugation moves; the certificate is then rounded and psi re-evaluated.
inline RelaxedGameResult relaxed_game_value(const NonlocalGame& g, int p, const Rational& beta, OptimizerConfig cfg) {
  g.validate();
  if (beta <= 0) throw ValidationError("config-invalid", "beta must be positive");
  cfg.p = p;
  const int n = g.questions(), m = g.answers();
  const Formula psi = build_game_formula(g);
  const Formula body = Formula::dotminus(psi, Formula::scale(beta, build_pvm_formula(n, m)));

  std::vector<int> vars;
  SearchSpace space;
  space.start = SearchSpace::Start::RandomPVM;
  for (int v = 0; v < n; ++v) {
    std::vector<int> group;
    for (int i = 0; i < m; ++i) {
      group.push_back(grouped_var(v, i, m));
      vars.push_back(grouped_var(v, i, m));
    }
    space.groups.push_back(std::move(group));
  }
  const GameKernel kernel(g);
  const double b = to_double(beta);
  auto objective = [&](const MatrixTuple& t) {
    return dotminus(kernel(t), b * pvm_residuals(group_tuple(t, n, m)).max());
  };

  RelaxedGameResult out;
  out.relaxed = maximize(objective, vars, cfg, space);
  out.relaxed.value = eval_qf(body, *out.relaxed.certificate);
  out.rounding = round_to_pvm(*out.relaxed.certificate, n, m, std::numeric_limits<double>::infinity());
  out.rounded_value = eval_qf(psi, to_matrix_tuple(out.rounding.pvm));
  return out;
}

// ---------------------------------------------------------------------------
// Game families

/// Graph coloring game: questions are vertices, uniform mu over all ordered
/// pairs unless weights (n x n, summing to 1) are given. Same vertex requires
/// equal colors, adjacent vertices distinct colors, other pairs always win.
inline NonlocalGame coloring_game(const std::vector<std::vector<int>>& adjacency, int m,
                                  const std::optional<std::vector<std::vector<Rational>>>& weights = std::nullopt) {
  const int n = static_cast<int>(adjacency.size());
  if (n < 1) throw InvalidArgument("coloring game needs a non-empty graph");
  if (m < 1) throw InvalidArgument("coloring game needs m >= 1");
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v)
    for (int w : adjacency[v]) {
      if (w < 0 || w >= n) throw InvalidArgument("adjacency refers to a missing vertex");
      if (w == v) throw InvalidArgument("coloring graphs cannot have self-loops");
      adj[v][w] = adj[w][v] = true;
    }
  NonlocalGame g(n, m);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (weights) g.set_mu(v, w, weights->at(v).at(w));
      else g.set_mu(v, w, Rational(1, n * n));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          bool ok = true;
          if (v == w) ok = i == j;
          else if (adj[v][w]) ok = i != j;
          g.set_wins(v, w, i, j, ok);
        }
    }
  g.validate();
  return g;
}

inline NonlocalGame complete_graph_coloring(int n, int m) {
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (v != w) adj[v].push_back(w);
  NonlocalGame g = coloring_game(adj, m);
  g.name = "K" + std::to_string(n) + "-" + std::to_string(m) + "-coloring";
  return g;
}

/// Proper synchronous game with integer weights 1..4 normalized to mu, the
/// diagonal decisions D(v,v,i,i) and the off-diagonal ones drawn at random.
inline NonlocalGame random_synchronous_game(int n, int m, Rng& rng) {
  NonlocalGame g(n, m);
  std::vector<int> weight(static_cast<std::size_t>(n) * n);
  int total = 0;
  for (auto& w : weight) total += (w = 1 + static_cast<int>(uniform_index(rng, 4)));
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      g.set_mu(v, w, Rational(weight[v * n + w], total));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (v == w) g.set_wins(v, w, i, j, i == j && uniform01(rng) < 0.8);
          else g.set_wins(v, w, i, j, uniform01(rng) < 0.5);
        }
    }
  g.validate();
  return g;
}

}  // namespace tracial
