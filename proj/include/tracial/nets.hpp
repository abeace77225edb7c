#pragma once

// Deterministic grid nets: over tuples of contractions in M_p(C) and over
// powers of the closed complex unit disk.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/matrix.hpp"
#include "tracial/rational.hpp"

namespace tracial {

enum class NetSpace { DiskPower, MatrixBall };

struct NetSpec {
  NetSpace space = NetSpace::MatrixBall;
  Rational mesh{0};
  double covering_radius = 0.0;
  std::uint64_t cardinality = 0;
};

/// K^N as a double, and as uint64 when it fits.
inline double power_as_double(std::uint64_t base, std::uint64_t exponent) {
  return std::pow(static_cast<double>(base), static_cast<double>(exponent));
}

inline std::uint64_t checked_power(std::uint64_t base, std::uint64_t exponent, std::uint64_t budget,
                                   const std::string& what) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exponent; ++k) {
    if (base != 0 && out > budget / base)
      throw BudgetExceeded(power_as_double(base, exponent), budget,
                           what + " needs " + std::to_string(power_as_double(base, exponent)) +
                               " points, budget is " + std::to_string(budget));
    out *= base;
  }
  if (out > budget)
    throw BudgetExceeded(static_cast<double>(out), budget,
                         what + " needs " + std::to_string(out) + " points, budget is " + std::to_string(budget));
  return out;
}

/// Grid over the real and imaginary parts of every entry of n matrices in
/// M_p(C): each coordinate ranges over {j * mesh : |j * mesh| <= 1}, and each
/// grid matrix is projected to the contraction ball. Halving the mesh yields
/// a superset of points before projection.
///
/// Covering radius (l1-of-2-norm metric): every contraction tuple a has a
/// grid point g with per-coordinate error at most h = max(mesh/2, 1 - J mesh),
/// so ||g_k - a_k||_2 <= h sqrt(2p); projection onto the (convex) ball is
/// non-expansive in the Frobenius norm and fixes a, giving n h sqrt(2p).
class MatrixBallGrid {
 public:
  MatrixBallGrid(int p, int n, Rational mesh, std::uint64_t budget) : p_(p), n_(n), mesh_(std::move(mesh)) {
    if (p < 1 || n < 1) throw InvalidArgument("matrix ball net requires p >= 1 and n >= 1");
    if (mesh_ <= 0) throw InvalidArgument("mesh must be positive");
    const Rational steps = 1 / mesh_;
    const auto j_max = boost::multiprecision::numerator(steps) / boost::multiprecision::denominator(steps);
    if (j_max > 1000000) throw InvalidArgument("mesh too fine");
    j_max_ = j_max.convert_to<int>();
    for (int j = -j_max_; j <= j_max_; ++j) values_.push_back(to_double(mesh_ * j));
    params_ = 2 * static_cast<std::uint64_t>(p) * p * n;
    cardinality_ = checked_power(values_.size(), params_, budget, "matrix ball net");
    const double m = to_double(mesh_);
    const double h = std::max(m / 2.0, 1.0 - j_max_ * m);
    radius_ = n * h * std::sqrt(2.0 * p);
  }

  std::uint64_t size() const { return cardinality_; }
  int dim() const { return p_; }
  int variables() const { return n_; }
  std::uint64_t real_parameters() const { return params_; }
  double covering_radius() const { return radius_; }

  NetSpec spec() const { return NetSpec{NetSpace::MatrixBall, mesh_, radius_, cardinality_}; }

  /// The index-th grid tuple (variables bound to `vars`, which must have n
  /// entries). Coordinates are ordered variable, column, row, re/im with the
  /// last one varying fastest.
  MatrixTuple point(std::uint64_t index, const std::vector<int>& vars) const {
    if (static_cast<int>(vars.size()) != n_) throw InvalidArgument("variable list size does not match the net");
    const std::uint64_t base = values_.size();
    std::vector<double> coords(params_);
    for (std::uint64_t k = params_; k-- > 0;) {
      coords[k] = values_[index % base];
      index /= base;
    }
    MatrixTuple t(p_);
    std::size_t c = 0;
    for (int v = 0; v < n_; ++v) {
      ComplexMatrix a(p_, p_);
      for (int col = 0; col < p_; ++col)
        for (int row = 0; row < p_; ++row) {
          a(row, col) = Complex(coords[c], coords[c + 1]);
          c += 2;
        }
      t.set(vars[v], project_to_contraction(a));
    }
    return t;
  }

 private:
  int p_;
  int n_;
  Rational mesh_;
  int j_max_ = 0;
  std::vector<double> values_;
  std::uint64_t params_ = 0;
  std::uint64_t cardinality_ = 0;
  double radius_ = 0.0;
};

/// Net of D^L for the max-over-coordinates metric, where each coordinate is
/// compared by complex modulus. Each factor is the K x K square grid with
/// endpoints +-1 projected radially into D (duplicates removed); K is the
/// smallest count whose covering radius sqrt(2)/(K-1) is <= eps, or K = 1
/// ({0}, radius 1) when eps >= 1.
struct DiskNet {
  std::vector<std::vector<Complex>> points;
  NetSpec spec;
};

inline std::vector<Complex> disk_factor(double eps, double& radius) {
  std::vector<Complex> out;
  if (eps >= 1.0) {
    radius = 1.0;
    out.emplace_back(0.0, 0.0);
    return out;
  }
  const int k = static_cast<int>(std::ceil(std::sqrt(2.0) / eps)) + 1;
  radius = std::sqrt(2.0) / (k - 1);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Complex z(-1.0 + 2.0 * a / (k - 1), -1.0 + 2.0 * b / (k - 1));
      if (std::abs(z) > 1.0) z /= std::abs(z);
      bool dup = false;
      for (const Complex& w : out)
        if (std::abs(w - z) < 1e-15) dup = true;
      if (!dup) out.push_back(z);
    }
  return out;
}

inline DiskNet disk_net(int L, const Rational& eps, std::uint64_t budget) {
  if (L < 1) throw InvalidArgument("disk_net requires L >= 1");
  if (eps <= 0) throw InvalidArgument("eps must be positive");
  double radius = 0.0;
  const std::vector<Complex> factor = disk_factor(to_double(eps), radius);
  const std::uint64_t total = checked_power(factor.size(), static_cast<std::uint64_t>(L), budget, "disk net");
  DiskNet net;
  net.spec = NetSpec{NetSpace::DiskPower, eps, radius, total};
  net.points.reserve(total);
  std::vector<std::size_t> digits(static_cast<std::size_t>(L), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Complex> pt(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) pt[k] = factor[digits[k]];
    net.points.push_back(std::move(pt));
    for (int k = L - 1; k >= 0; --k) {
      if (++digits[k] < factor.size()) break;
      digits[k] = 0;
    }
  }
  return net;
}

}  // namespace tracial
