#pragma once

// Trace moments of matrix tuples, grid-net lower bounds for universal
// sentences, and an empirical cross-dimension density probe.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/evaluator.hpp"
#include "tracial/formula.hpp"
#include "tracial/matrix.hpp"
#include "tracial/nets.hpp"
#include "tracial/random.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"

namespace tracial {

struct MomentVector {
  int n = 0;
  int d = 0;
  std::vector<Complex> values;  // canonical monomial order

  std::vector<StarMonomial> monomials() const { return enumerate_monomials(n, d); }
};

namespace detail {

inline std::vector<ComplexMatrix> letters_of(const MatrixTuple& t, int n) {
  std::vector<ComplexMatrix> letters;
  for (int v = 1; v <= n; ++v) {
    if (!t.contains(v)) throw ValidationError("dimension-mismatch", "tuple lacks variable x" + std::to_string(v));
    const ComplexMatrix& a = t.at(v);
    if (a.rows() != t.dim() || a.cols() != t.dim())
      throw ValidationError("dimension-mismatch", "matrix size differs from the tuple dimension");
    letters.push_back(a);
    letters.push_back(a.adjoint());
  }
  return letters;
}

}  // namespace detail

/// tau of every *-monomial of degree 1..d in x1..xn, where n is the largest
/// variable index of t. Degree-k products reuse their degree-(k-1) prefixes.
inline MomentVector moment_map(const MatrixTuple& t, int d) {
  const auto vars = t.variables();
  if (vars.empty()) throw ValidationError("dimension-mismatch", "moment map of an empty tuple");
  const int n = vars.back();
  if (d < 1) throw InvalidArgument("moment degree must be >= 1");
  const std::uint64_t count = monomial_count(n, d);
  if (count > (std::uint64_t{1} << 24)) throw InvalidArgument("too many moments");
  const std::vector<ComplexMatrix> letters = detail::letters_of(t, n);

  MomentVector out{n, d, {}};
  out.values.reserve(static_cast<std::size_t>(count));
  std::vector<ComplexMatrix> level = letters;
  for (const auto& a : level) out.values.push_back(normalized_trace(a));
  for (int k = 2; k <= d; ++k) {
    std::vector<ComplexMatrix> next;
    next.reserve(level.size() * letters.size());
    for (const auto& prefix : level)
      for (const auto& l : letters) {
        next.push_back(prefix * l);
        out.values.push_back(normalized_trace(next.back()));
      }
    level = std::move(next);
  }
  return out;
}

/// max_k max(|Re(a_k - b_k)|, |Im(a_k - b_k)|).
inline double moment_distance(const MomentVector& a, const MomentVector& b) {
  if (a.values.size() != b.values.size()) throw ValidationError("dimension-mismatch", "moment vector lengths differ");
  double r = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const Complex z = a.values[k] - b.values[k];
    r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
  }
  return r;
}

/// The distance above to a fixed target s as a restricted formula in x1..xn:
/// |y| is written (y -. 0) + (0 -. y) with y = Re/Im tau(m - s_m 1).
inline Formula build_moment_distance_formula(int n, int d, const std::vector<Complex>& target) {
  const auto monomials = enumerate_monomials(n, d);
  if (monomials.size() != target.size()) throw ValidationError("dimension-mismatch", "target has the wrong length");
  const Formula zero = Formula::constant(0);
  auto abs_of = [&](const Formula& y) {
    return Formula::add(Formula::dotminus(y, zero), Formula::dotminus(zero, y));
  };
  std::vector<Formula> coords;
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    const ComplexRational shift(-Rational(target[k].real()), -Rational(target[k].imag()));
    const Term diff = Term::sum(Term::from_monomial(monomials[k]), Term::scale(shift, Term::one()));
    coords.push_back(Formula::max(abs_of(Formula::trace_re(diff)), abs_of(Formula::trace_im(diff))));
  }
  return fold(coords, [](const Formula& a, const Formula& b) { return Formula::max(a, b); });
}

// ---------------------------------------------------------------------------
// Nets

struct MatrixBallNet {
  std::vector<MatrixTuple> points;
  NetSpec spec;
};

/// Every point of the matrix-ball grid over x1..xn.
inline MatrixBallNet matrix_ball_net(int p, int n, const Rational& mesh, std::uint64_t budget) {
  const MatrixBallGrid grid(p, n, mesh, budget);
  std::vector<int> vars;
  for (int v = 1; v <= n; ++v) vars.push_back(v);
  MatrixBallNet out;
  out.spec = grid.spec();
  out.points.reserve(static_cast<std::size_t>(grid.size()));
  for (std::uint64_t i = 0; i < grid.size(); ++i) out.points.push_back(grid.point(i, vars));
  return out;
}

struct NetBound {
  double r = 0.0;    // max of the body over the net
  double gap = 0.0;  // r <= sentence value in M_p <= r + gap
  double lipschitz = 0.0;
  MatrixTuple certificate{1};
  NetSpec spec;
};

struct NetBoundOptions {
  std::uint64_t budget = 1'000'000;
  int threads = 1;
  std::function<void(std::uint64_t, double)> on_point;
};

/// For a universal sentence sup_x f(x): r = max of f over the grid net of
/// the matrix ball at the given mesh, gap = L(f) * covering radius.
inline NetBound net_lower_bound(const Sentence& sigma, int p, const Rational& mesh, const NetBoundOptions& opts = {}) {
  if (sigma.classification() != Classification::Universal)
    throw Unsupported("net bounds need a universal sentence", "unsupported-classification");
  const Formula body = sigma.body();
  NetEvalOptions eo;
  eo.budget = opts.budget;
  eo.threads = opts.threads;
  eo.on_point = opts.on_point;
  const EvalResult res = net_eval(body, sigma.bound_vars(), p, mesh, eo);
  NetBound out;
  out.r = res.value;
  out.gap = res.gap;
  out.lipschitz = modulus_of_continuity(body).lipschitz();
  out.certificate = *res.certificate;
  out.spec = *res.net;
  return out;
}

/// Halves the mesh, starting from 1, until the gap is at most eps, i.e. until
/// the covering radius is within the modulus delta(eps).
inline NetBound net_lower_bound_within(const Sentence& sigma, int p, double eps, const NetBoundOptions& opts = {}) {
  if (!(eps > 0.0)) throw InvalidArgument("target gap must be positive");
  if (sigma.classification() != Classification::Universal)
    throw Unsupported("net bounds need a universal sentence", "unsupported-classification");
  const Modulus modulus = modulus_of_continuity(sigma.body());
  const int n = static_cast<int>(sigma.bound_vars().size());
  Rational mesh(1);
  for (int halvings = 0; halvings < 60; ++halvings, mesh /= 2) {
    const MatrixBallGrid probe(p, n, mesh, std::numeric_limits<std::uint64_t>::max());
    if (probe.covering_radius() <= modulus(eps)) return net_lower_bound(sigma, p, mesh, opts);
  }
  throw InvalidArgument("no mesh reaches the requested gap");
}

// ---------------------------------------------------------------------------
// Density probe

struct DensitySample {
  double distance = 0.0;  // best distance found at p_small
  MatrixTuple witness{1};
  MatrixTuple target{1};
};

struct DensityGapResult {
  double gap = 0.0;  // max over samples
  std::vector<DensitySample> samples;
};

struct DensityOptions {
  /// Per-sample extra starting points at p_small (e.g. embedded witnesses).
  std::vector<std::vector<MatrixTuple>> warm_starts;
};

/// Samples `samples` random contraction tuples in M_{p_large}, and for each
/// minimizes the moment distance over tuples in M_{p_small} with the
/// hill-climbing optimizer; returns the largest distance found. When
/// p_small == p_large each sample also starts from itself.
inline DensityGapResult density_gap(int n, int d, int p_small, int p_large, int samples, OptimizerConfig cfg,
                                    const DensityOptions& opts = {}) {
  if (n < 1 || d < 1) throw ValidationError("config-invalid", "n and d must be >= 1");
  if (p_small < 1 || p_small > p_large) throw ValidationError("config-invalid", "need 1 <= p_small <= p_large");
  if (samples < 1) throw ValidationError("config-invalid", "samples must be >= 1");
  cfg.p = p_small;
  std::vector<int> vars;
  for (int v = 1; v <= n; ++v) vars.push_back(v);

  DensityGapResult out;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s), 5));
    const MatrixTuple target = random_contraction_tuple(p_large, vars, rng);
    const MomentVector mt = moment_map(target, d);

    OptimizerConfig inner = cfg;
    inner.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s), 6);
    if (p_small == p_large) inner.warm_starts.push_back(target);
    if (s < static_cast<int>(opts.warm_starts.size()))
      for (const auto& w : opts.warm_starts[s]) inner.warm_starts.push_back(w);
    auto objective = [&](const MatrixTuple& t) { return -moment_distance(moment_map(t, d), mt); };
    const EvalResult r = maximize(objective, vars, inner);

    DensitySample ds;
    ds.witness = *r.certificate;
    ds.distance = moment_distance(moment_map(ds.witness, d), mt);
    ds.target = target;
    out.gap = std::max(out.gap, ds.distance);
    out.samples.push_back(std::move(ds));
  }
  return out;
}

/// density_gap for each p_small in order, warm-starting every run with the
/// block embeddings of earlier witnesses whose dimension divides p_small.
inline std::vector<DensityGapResult> density_gap_sweep(int n, int d, const std::vector<int>& p_small_values, int p_large,
                                                       int samples, const OptimizerConfig& cfg) {
  std::vector<DensityGapResult> out;
  for (int p : p_small_values) {
    DensityOptions opts;
    opts.warm_starts.resize(static_cast<std::size_t>(samples));
    for (const auto& prev : out)
      for (int s = 0; s < samples; ++s) {
        const MatrixTuple& w = prev.samples[s].witness;
        if (p % w.dim() == 0) opts.warm_starts[s].push_back(embed(w, p / w.dim()));
      }
    out.push_back(density_gap(n, d, p, p_large, samples, cfg, opts));
  }
  return out;
}

}  // namespace tracial
