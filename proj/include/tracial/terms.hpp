#pragma once

// Terms of the free *-algebra on x1..xn and the canonical enumeration of
// *-monomials used to index moment vectors.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/rational.hpp"

namespace tracial {

/// x_i or x_i*.
struct Letter {
  int var = 1;
  bool starred = false;

  /// Position in the alphabet x1 < x1* < x2 < x2* < ...
  int alphabet_index() const { return 2 * (var - 1) + (starred ? 1 : 0); }
  static Letter from_alphabet_index(int k) { return Letter{k / 2 + 1, (k % 2) == 1}; }

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word in the letters; the empty word is the identity monomial.
class StarMonomial {
 public:
  StarMonomial() = default;
  explicit StarMonomial(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  const std::vector<Letter>& letters() const { return letters_; }
  int degree() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const { return letters_.empty(); }

  /// Degree first, then lexicographic in the alphabet order.
  friend bool operator<(const StarMonomial& a, const StarMonomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t k = 0; k < a.letters_.size(); ++k) {
      int ka = a.letters_[k].alphabet_index();
      int kb = b.letters_[k].alphabet_index();
      if (ka != kb) return ka < kb;
    }
    return false;
  }
  friend bool operator==(const StarMonomial&, const StarMonomial&) = default;

  /// "1" for the identity, otherwise letters separated by spaces, e.g. "x1 x2'".
  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string out;
    for (const Letter& l : letters_) {
      if (!out.empty()) out += ' ';
      out += "x" + std::to_string(l.var);
      if (l.starred) out += '\'';
    }
    return out;
  }

 private:
  std::vector<Letter> letters_;
};

/// Reverses the word and flips every star.
inline StarMonomial monomial_adjoint(const StarMonomial& m) {
  std::vector<Letter> out(m.letters().rbegin(), m.letters().rend());
  for (Letter& l : out) l.starred = !l.starred;
  return StarMonomial(std::move(out));
}

/// L(n,d) = sum_{j=1}^{d} (2n)^j.
inline std::uint64_t monomial_count(int n, int d) {
  if (n <= 0 || d <= 0) throw InvalidArgument("monomial_count requires n >= 1 and d >= 1");
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(n);
  std::uint64_t total = 0;
  std::uint64_t power = 1;
  for (int j = 1; j <= d; ++j) {
    if (power > std::numeric_limits<std::uint64_t>::max() / base)
      throw InvalidArgument("monomial_count overflows 64 bits");
    power *= base;
    if (total > std::numeric_limits<std::uint64_t>::max() - power)
      throw InvalidArgument("monomial_count overflows 64 bits");
    total += power;
  }
  return total;
}

/// All *-monomials of degree 1..d in canonical order.
inline std::vector<StarMonomial> enumerate_monomials(int n, int d) {
  const std::uint64_t count = monomial_count(n, d);
  if (count > (std::uint64_t{1} << 26)) throw InvalidArgument("too many monomials to enumerate");
  const int alphabet = 2 * n;
  std::vector<StarMonomial> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int degree = 1; degree <= d; ++degree) {
    std::vector<int> digits(degree, 0);
    while (true) {
      std::vector<Letter> letters;
      letters.reserve(degree);
      for (int k : digits) letters.push_back(Letter::from_alphabet_index(k));
      out.emplace_back(std::move(letters));
      int pos = degree - 1;
      while (pos >= 0 && digits[pos] == alphabet - 1) digits[pos--] = 0;
      if (pos < 0) break;
      ++digits[pos];
    }
  }
  return out;
}

/// Immutable expression tree in the free *-algebra. Copies share structure.
class Term {
 public:
  enum class Kind { Var, One, Zero, Adjoint, Sum, Prod, Scale };

  static Term var(int index) {
    if (index < 1) throw InvalidArgument("variable index must be >= 1");
    return Term(Node{Kind::Var, index, {}, {}});
  }
  static Term one() { return Term(Node{Kind::One, 0, {}, {}}); }
  static Term zero() { return Term(Node{Kind::Zero, 0, {}, {}}); }
  static Term adjoint(Term t) { return Term(Node{Kind::Adjoint, 0, {}, {std::move(t)}}); }
  static Term sum(Term a, Term b) { return Term(Node{Kind::Sum, 0, {}, {std::move(a), std::move(b)}}); }
  static Term prod(Term a, Term b) { return Term(Node{Kind::Prod, 0, {}, {std::move(a), std::move(b)}}); }
  static Term scale(ComplexRational q, Term t) {
    return Term(Node{Kind::Scale, 0, std::move(q), {std::move(t)}});
  }

  /// Left-nested product of the monomial's letters; identity maps to One.
  static Term from_monomial(const StarMonomial& m) {
    if (m.is_identity()) return one();
    std::optional<Term> acc;
    for (const Letter& l : m.letters()) {
      Term letter = l.starred ? adjoint(var(l.var)) : var(l.var);
      acc = acc ? prod(*acc, letter) : letter;
    }
    return *acc;
  }

  Kind kind() const { return node_->kind; }
  int var_index() const { return node_->index; }
  const ComplexRational& coefficient() const { return node_->coeff; }
  const Term& child(std::size_t k = 0) const { return node_->children.at(k); }
  std::size_t arity() const { return node_->children.size(); }

  /// Largest variable index occurring, 0 if none.
  int max_var() const {
    if (kind() == Kind::Var) return var_index();
    int best = 0;
    for (const Term& c : node_->children) best = std::max(best, c.max_var());
    return best;
  }

  void collect_vars(std::set<int>& out) const {
    if (kind() == Kind::Var) out.insert(var_index());
    for (const Term& c : node_->children) c.collect_vars(out);
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.var_index() != b.var_index() || !(a.coefficient() == b.coefficient()) ||
        a.arity() != b.arity())
      return false;
    for (std::size_t k = 0; k < a.arity(); ++k)
      if (!(a.child(k) == b.child(k))) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    int index;
    ComplexRational coeff;
    std::vector<Term> children;
  };
  explicit Term(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> node_;
};

inline std::string scalar_to_string(const ComplexRational& q) {
  if (q.is_real()) return to_string(q.re);
  return "[" + to_string(q.re) + ", " + to_string(q.im) + "]";
}

namespace detail {
inline bool is_bare_scalar(const Term& t) {
  if (t.kind() != Term::Kind::Scale || t.child().kind() != Term::Kind::One) return false;
  const ComplexRational& q = t.coefficient();
  return !(q.is_real() && (q.re == 0 || q.re == 1));
}
}  // namespace detail

/// Canonical text; parses back to a structurally equal term.
inline std::string print_term(const Term& t) {
  using K = Term::Kind;
  auto factor = [](const Term& c) {
    switch (c.kind()) {
      case K::Var:
      case K::One:
      case K::Zero:
      case K::Adjoint:
      case K::Sum:
      case K::Prod:
        return print_term(c);
      case K::Scale:
        return "(" + print_term(c) + ")";
    }
    return std::string{};
  };
  switch (t.kind()) {
    case K::Var:
      return "x" + std::to_string(t.var_index());
    case K::One:
      return "1";
    case K::Zero:
      return "0";
    case K::Adjoint: {
      const Term& c = t.child();
      // Constants need parentheses: "1'" would read as the number 1 then a prime.
      bool bare = c.kind() == K::Var || c.kind() == K::Adjoint || c.kind() == K::Sum || c.kind() == K::Prod;
      return (bare ? print_term(c) : "(" + print_term(c) + ")") + "'";
    }
    case K::Sum:
      return "(" + print_term(t.child(0)) + " + " + print_term(t.child(1)) + ")";
    case K::Prod:
      return "(" + print_term(t.child(0)) + " * " + print_term(t.child(1)) + ")";
    case K::Scale:
      if (detail::is_bare_scalar(t)) return scalar_to_string(t.coefficient());
      return scalar_to_string(t.coefficient()) + " " + factor(t.child());
  }
  return {};
}

}  // namespace tracial
