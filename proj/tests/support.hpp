#pragma once

// Shared generators for property tests (hand-rolled, seeded).

#include <cstdint>
#include <vector>

#include "tracial/tracial.hpp"

namespace testsupport {

using namespace tracial;

inline Rational random_rational(Rng& rng, bool allow_negative) {
  const long long num = static_cast<long long>(uniform_index(rng, 13));
  const long long den = 1 + static_cast<long long>(uniform_index(rng, 6));
  Rational q(num, den);
  if (allow_negative && uniform01(rng) < 0.3) q = -q;
  return q;
}

inline Term random_term(Rng& rng, int depth, int nvars) {
  const std::size_t choice = depth <= 0 ? uniform_index(rng, 3) : uniform_index(rng, 8);
  switch (choice) {
    case 0:
    case 1:
      return Term::var(1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(nvars))));
    case 2:
      return uniform01(rng) < 0.5 ? Term::one() : Term::zero();
    case 3:
      return Term::adjoint(random_term(rng, depth - 1, nvars));
    case 4:
      return Term::sum(random_term(rng, depth - 1, nvars), random_term(rng, depth - 1, nvars));
    case 5:
    case 6:
      return Term::prod(random_term(rng, depth - 1, nvars), random_term(rng, depth - 1, nvars));
    default: {
      ComplexRational q(random_rational(rng, true));
      if (uniform01(rng) < 0.3) q.im = random_rational(rng, true);
      return Term::scale(q, random_term(rng, depth - 1, nvars));
    }
  }
}

/// Random formula of depth <= depth; quantifiers bind random subsets of x1..x3.
inline Formula random_formula(Rng& rng, int depth, int nvars = 3, bool quantifiers = true) {
  const std::size_t choice = depth <= 0 ? uniform_index(rng, 4) : uniform_index(rng, quantifiers ? 12 : 10);
  auto sub = [&] { return random_formula(rng, depth - 1, nvars, quantifiers); };
  switch (choice) {
    case 0: return Formula::norm2(random_term(rng, 2, nvars));
    case 1: return Formula::trace_re(random_term(rng, 2, nvars));
    case 2: return Formula::trace_im(random_term(rng, 2, nvars));
    case 3: return Formula::constant(random_rational(rng, false));
    case 4: return Formula::add(sub(), sub());
    case 5: return Formula::mul(sub(), sub());
    case 6: return Formula::scale(random_rational(rng, false), sub());
    case 7: return Formula::dotminus(sub(), sub());
    case 8: return uniform01(rng) < 0.5 ? Formula::max(sub(), sub()) : Formula::min(sub(), sub());
    case 9: return Formula::half(sub());
    default: {
      std::vector<int> vars{1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(nvars)))};
      if (uniform01(rng) < 0.4) vars.push_back(vars.front() % nvars + 1);
      return choice == 10 ? Formula::sup(vars, sub()) : Formula::inf(vars, sub());
    }
  }
}

inline std::vector<int> iota_vars(int n) {
  std::vector<int> v;
  for (int k = 1; k <= n; ++k) v.push_back(k);
  return v;
}

/// Adds Hermitian noise of 2-norm exactly eps to every member of the tuple.
inline PVMTuple perturb(const PVMTuple& t, double eps, Rng& rng) {
  PVMTuple out = t;
  for (auto& g : out.groups)
    for (auto& a : g) {
      ComplexMatrix h = random_hermitian(t.dim, rng);
      a += h * (eps / two_norm(h));
    }
  return out;
}

}  // namespace testsupport
