#pragma once

// Dense complex matrices with the normalized trace tau = Tr/p, the trace
// 2-norm, spectral helpers, and seeded random contractions and PVMs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/random.hpp"

namespace tracial {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline void require_square(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw ValidationError("dimension-mismatch", "expected a non-empty square matrix");
}

inline Complex normalized_trace(const ComplexMatrix& a) {
  require_square(a);
  return a.trace() / static_cast<double>(a.rows());
}

/// ||a||_2 = sqrt(tau(a* a)).
inline double two_norm(const ComplexMatrix& a) {
  require_square(a);
  return std::sqrt(a.squaredNorm() / static_cast<double>(a.rows()));
}

inline Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
}

inline double operator_norm(const ComplexMatrix& a) {
  require_square(a);
  return singular_values(a)(0);
}

/// Nearest contraction: clips singular values at 1 and keeps the unitary
/// factors. Inputs that are already contractions come back unchanged.
inline ComplexMatrix project_to_contraction(const ComplexMatrix& a) {
  require_square(a);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(0) <= 1.0) return a;
  // A few ulps below 1 so that the rebuilt product still has norm <= 1 after
  // rounding.
  Eigen::VectorXd clipped = s.cwiseMin(1.0 - 4 * std::numeric_limits<double>::epsilon());
  return svd.matrixU() * clipped.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
}

struct HermitianEig {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // orthonormal columns, matching `values`
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order and each eigenvector is rotated so that its first
/// non-negligible component is real and positive.
inline HermitianEig hermitian_eig(const ComplexMatrix& a, double tol = 1e-8) {
  require_square(a);
  const double asym = two_norm(a - a.adjoint());
  if (asym > tol)
    throw ValidationError("not-hermitian", "matrix is not Hermitian (||a - a*||_2 = " + std::to_string(asym) + ")");
  const ComplexMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const Eigen::Index p = a.rows();
  HermitianEig out;
  out.values.resize(static_cast<std::size_t>(p));
  out.vectors.resize(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    // Eigen returns ascending order.
    const Eigen::Index src = p - 1 - k;
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    Eigen::VectorXcd v = solver.eigenvectors().col(src);
    for (Eigen::Index r = 0; r < p; ++r) {
      if (std::abs(v(r)) > 1e-10) {
        v *= std::conj(v(r)) / std::abs(v(r));
        v(r) = std::abs(v(r));
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  return out;
}

/// a (x) 1_q: the trace-preserving block embedding M_p -> M_{pq}.
inline ComplexMatrix embed(const ComplexMatrix& a, int q) {
  if (q < 1) throw InvalidArgument("embedding factor must be >= 1");
  const Eigen::Index p = a.rows();
  ComplexMatrix out = ComplexMatrix::Zero(p * q, p * q);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (int k = 0; k < q; ++k) out(i * q + k, j * q + k) = a(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Tuples

/// Assignment of variables (1-based indices) to matrices of a common dimension.
class MatrixTuple {
 public:
  MatrixTuple() = default;
  explicit MatrixTuple(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("matrix dimension must be >= 1");
  }

  /// Variables 1..n bound in order.
  static MatrixTuple from_list(const std::vector<ComplexMatrix>& mats) {
    if (mats.empty()) throw InvalidArgument("empty matrix list");
    MatrixTuple t(static_cast<int>(mats.front().rows()));
    for (std::size_t k = 0; k < mats.size(); ++k) t.set(static_cast<int>(k) + 1, mats[k]);
    return t;
  }

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(int var) const { return entries_.count(var) != 0; }

  void set(int var, ComplexMatrix a) {
    if (var < 1) throw InvalidArgument("variable index must be >= 1");
    require_square(a);
    if (dim_ == 0) dim_ = static_cast<int>(a.rows());
    if (a.rows() != dim_)
      throw ValidationError("dimension-mismatch", "matrix for x" + std::to_string(var) + " has dimension " +
                                                      std::to_string(a.rows()) + ", expected " + std::to_string(dim_));
    entries_[var] = std::move(a);
  }

  const ComplexMatrix& at(int var) const {
    auto it = entries_.find(var);
    if (it == entries_.end())
      throw ValidationError("unbound-variable", "variable x" + std::to_string(var) + " is not assigned");
    return it->second;
  }

  std::vector<int> variables() const {
    std::vector<int> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const MatrixTuple& a, const MatrixTuple& b) {
    if (a.dim_ != b.dim_ || a.entries_.size() != b.entries_.size()) return false;
    for (const auto& [k, m] : a.entries_) {
      auto it = b.entries_.find(k);
      if (it == b.entries_.end() || it->second != m) return false;
    }
    return true;
  }

 private:
  int dim_ = 0;
  std::map<int, ComplexMatrix> entries_;
};

inline bool is_contraction_tuple(const MatrixTuple& t, double tol = 1e-10) {
  for (const auto& [k, a] : t)
    if (operator_norm(a) > 1.0 + tol) return false;
  return true;
}

/// sum_k ||a_k - b_k||_2 over the variables of `a`: the l1-of-2-norm metric.
inline double l1_two_norm_distance(const MatrixTuple& a, const MatrixTuple& b) {
  double total = 0.0;
  for (const auto& [k, m] : a) total += two_norm(m - b.at(k));
  return total;
}

inline MatrixTuple embed(const MatrixTuple& t, int q) {
  MatrixTuple out(t.dim() * q);
  for (const auto& [k, a] : t) out.set(k, embed(a, q));
  return out;
}

/// n groups of m projections each, all of dimension `dim`.
struct PVMTuple {
  int dim = 0;
  std::vector<std::vector<ComplexMatrix>> groups;

  int questions() const { return static_cast<int>(groups.size()); }
  int answers() const { return groups.empty() ? 0 : static_cast<int>(groups.front().size()); }
};

/// Variable index of x_{v,i} (0-based v, i) in grouped n x m layout.
inline int grouped_var(int v, int i, int m) { return v * m + i + 1; }

inline MatrixTuple to_matrix_tuple(const PVMTuple& t) {
  MatrixTuple out(t.dim);
  const int m = t.answers();
  for (int v = 0; v < t.questions(); ++v)
    for (int i = 0; i < m; ++i) out.set(grouped_var(v, i, m), t.groups[v][i]);
  return out;
}

/// Reads variables 1..n*m back into n groups of m.
inline PVMTuple group_tuple(const MatrixTuple& a, int n, int m) {
  if (n < 1 || m < 1) throw InvalidArgument("group counts must be >= 1");
  PVMTuple out{a.dim(), {}};
  out.groups.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < m; ++i) out.groups[v].push_back(a.at(grouped_var(v, i, m)));
  return out;
}

inline PVMTuple embed(const PVMTuple& t, int q) {
  PVMTuple out{t.dim * q, {}};
  for (const auto& g : t.groups) {
    std::vector<ComplexMatrix> eg;
    for (const auto& a : g) eg.push_back(embed(a, q));
    out.groups.push_back(std::move(eg));
  }
  return out;
}

/// Largest 2-norm residual of each PVM condition across all groups.
struct PVMResiduals {
  double idempotent = 0.0;   // ||x^2 - x||_2
  double self_adjoint = 0.0; // ||x* - x||_2
  double completeness = 0.0; // ||sum_i x_i - 1||_2
  double max() const { return std::max({idempotent, self_adjoint, completeness}); }
};

inline PVMResiduals pvm_residuals(const PVMTuple& t) {
  PVMResiduals r;
  for (const auto& g : t.groups) {
    if (g.empty()) throw ValidationError("invalid-pvm", "empty PVM group");
    ComplexMatrix total = ComplexMatrix::Zero(t.dim, t.dim);
    for (const auto& x : g) {
      if (x.rows() != t.dim || x.cols() != t.dim)
        throw ValidationError("dimension-mismatch", "PVM member has the wrong dimension");
      r.idempotent = std::max(r.idempotent, two_norm(x * x - x));
      r.self_adjoint = std::max(r.self_adjoint, two_norm(x.adjoint() - x));
      total += x;
    }
    r.completeness = std::max(r.completeness, two_norm(total - ComplexMatrix::Identity(t.dim, t.dim)));
  }
  return r;
}

inline bool is_pvm(const PVMTuple& t, double tol = 1e-8) {
  if (t.dim < 1 || t.groups.empty()) return false;
  const std::size_t m = t.groups.front().size();
  for (const auto& g : t.groups)
    if (g.size() != m) return false;
  return pvm_residuals(t).max() <= tol;
}

inline void validate_pvm(const PVMTuple& t, double tol = 1e-8) {
  if (!is_pvm(t, tol))
    throw ValidationError("invalid-pvm", "tuple is not a PVM tuple within tolerance " + std::to_string(tol));
}

// ---------------------------------------------------------------------------
// Seeded random generation

inline ComplexMatrix random_gaussian(int p, Rng& rng) {
  ComplexMatrix z(p, p);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      z(i, j) = Complex(re * s, im * s);
    }
  return z;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal moved into Q.
inline ComplexMatrix random_unitary(int p, Rng& rng) {
  const ComplexMatrix z = random_gaussian(p, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(p, p);
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < p; ++k) {
    const Complex d = r(k, k);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(k) *= d / ad;
  }
  return q;
}

/// Random Hermitian matrix (GUE-like), unnormalized.
inline ComplexMatrix random_hermitian(int p, Rng& rng) {
  const ComplexMatrix z = random_gaussian(p, rng);
  return (z + z.adjoint()) / 2.0;
}

/// Random contraction U diag(s) V* with Haar U, V and s_k uniform in [0, 1].
inline ComplexMatrix random_contraction(int p, Rng& rng) {
  const ComplexMatrix u = random_unitary(p, rng);
  const ComplexMatrix v = random_unitary(p, rng);
  Eigen::VectorXcd s(p);
  for (int k = 0; k < p; ++k) s(k) = uniform01(rng);
  return u * s.asDiagonal() * v.adjoint();
}

inline MatrixTuple random_contraction_tuple(int p, const std::vector<int>& vars, Rng& rng) {
  MatrixTuple t(p);
  for (int k : vars) t.set(k, random_contraction(p, rng));
  return t;
}

/// C(p+m-1, m-1), saturating at UINT64_MAX.
inline std::uint64_t composition_count(int p, int m) {
  if (p < 0 || m < 1) throw InvalidArgument("composition_count requires p >= 0, m >= 1");
  const std::uint64_t top = static_cast<std::uint64_t>(p + m - 1);
  const std::uint64_t k = static_cast<std::uint64_t>(std::min(m - 1, p));
  unsigned __int128 c = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    c = c * (top - k + j) / j;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

/// All ways of writing p as an ordered sum of m non-negative parts, in
/// lexicographic order with the first part descending (p,0,..) first.
inline std::vector<std::vector<int>> all_compositions(int p, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int r = remaining; r >= 0; --r) {
      cur[pos] = r;
      self(self, pos + 1, remaining - r);
    }
  };
  rec(rec, 0, p);
  return out;
}

/// Uniform over compositions of p into m parts (stars and bars).
inline std::vector<int> random_composition(int p, int m, Rng& rng) {
  const int slots = p + m - 1;
  std::vector<int> positions(static_cast<std::size_t>(slots));
  for (int k = 0; k < slots; ++k) positions[k] = k;
  // Partial Fisher-Yates picks m-1 bar positions.
  for (int k = 0; k < m - 1; ++k) {
    const int j = k + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(slots - k)));
    std::swap(positions[k], positions[j]);
  }
  std::vector<int> bars(positions.begin(), positions.begin() + (m - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<int> parts;
  int prev = -1;
  for (int b : bars) {
    parts.push_back(b - prev - 1);
    prev = b;
  }
  parts.push_back(slots - prev - 1);
  return parts;
}

/// Projections onto consecutive column blocks of `u` with the given ranks.
inline std::vector<ComplexMatrix> pvm_from_unitary(const ComplexMatrix& u, const std::vector<int>& ranks) {
  const int p = static_cast<int>(u.rows());
  std::vector<ComplexMatrix> out;
  int col = 0;
  for (int r : ranks) {
    if (r == 0) {
      out.push_back(ComplexMatrix::Zero(p, p));
    } else {
      const auto block = u.middleCols(col, r);
      out.push_back(block * block.adjoint());
    }
    col += r;
  }
  return out;
}

inline void check_ranks(int p, int m, const std::vector<int>& ranks) {
  if (static_cast<int>(ranks.size()) != m) throw InvalidArgument("rank list must have m entries");
  int total = 0;
  for (int r : ranks) {
    if (r < 0) throw InvalidArgument("ranks must be non-negative");
    total += r;
  }
  if (total != p) throw InvalidArgument("ranks must sum to the dimension p");
}

/// m orthogonal projections summing to the identity of M_p. Without explicit
/// ranks a composition of p is drawn uniformly. Deterministic in `seed`.
inline std::vector<ComplexMatrix> random_pvm(int p, int m, const std::optional<std::vector<int>>& ranks,
                                             std::uint64_t seed) {
  if (p < 1 || m < 1) throw InvalidArgument("random_pvm requires p >= 1 and m >= 1");
  Rng rng(seed);
  std::vector<int> r = ranks ? *ranks : random_composition(p, m, rng);
  check_ranks(p, m, r);
  return pvm_from_unitary(random_unitary(p, rng), r);
}

/// n independent random PVM groups.
inline PVMTuple random_pvm_tuple(int p, int n, int m, Rng& rng) {
  PVMTuple t{p, {}};
  for (int v = 0; v < n; ++v) {
    std::vector<int> r = random_composition(p, m, rng);
    t.groups.push_back(pvm_from_unitary(random_unitary(p, rng), r));
  }
  return t;
}

}  // namespace tracial
