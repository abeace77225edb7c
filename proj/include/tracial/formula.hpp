#pragma once

// Restricted continuous-logic formulas in the language of tracial von Neumann
// algebras: atoms norm2/trRe/trIm of terms, a fixed finite connective set,
// and sup/inf quantifiers over the operator-norm unit ball.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tracial/errors.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"

namespace tracial {

class Formula {
 public:
  enum class Kind { Norm2, TraceRe, TraceIm, Const, Add, Mul, Scale, DotMinus, Max, Min, Half, Sup, Inf };

  static Formula norm2(Term t) { return atom(Kind::Norm2, std::move(t)); }
  static Formula trace_re(Term t) { return atom(Kind::TraceRe, std::move(t)); }
  static Formula trace_im(Term t) { return atom(Kind::TraceIm, std::move(t)); }
  static Formula constant(Rational q) {
    if (q < 0) throw InvalidArgument("formula constants must be non-negative");
    Node n{Kind::Const};
    n.q = std::move(q);
    return Formula(std::move(n));
  }
  static Formula add(Formula a, Formula b) { return binary(Kind::Add, std::move(a), std::move(b)); }
  static Formula mul(Formula a, Formula b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
  static Formula dotminus(Formula a, Formula b) { return binary(Kind::DotMinus, std::move(a), std::move(b)); }
  static Formula max(Formula a, Formula b) { return binary(Kind::Max, std::move(a), std::move(b)); }
  static Formula min(Formula a, Formula b) { return binary(Kind::Min, std::move(a), std::move(b)); }
  static Formula half(Formula a) {
    Node n{Kind::Half};
    n.children.push_back(std::move(a));
    return Formula(std::move(n));
  }
  static Formula scale(Rational q, Formula a) {
    if (q < 0) throw InvalidArgument("formula-level scaling must be non-negative");
    Node n{Kind::Scale};
    n.q = std::move(q);
    n.children.push_back(std::move(a));
    return Formula(std::move(n));
  }
  static Formula sup(std::vector<int> vars, Formula body) { return quantifier(Kind::Sup, std::move(vars), std::move(body)); }
  static Formula inf(std::vector<int> vars, Formula body) { return quantifier(Kind::Inf, std::move(vars), std::move(body)); }

  Kind kind() const { return node_->kind; }
  const Term& term() const { return *node_->term; }
  const Rational& rational() const { return node_->q; }
  const std::vector<int>& vars() const { return node_->vars; }
  const Formula& child(std::size_t k = 0) const { return node_->children.at(k); }
  std::size_t arity() const { return node_->children.size(); }

  bool is_atomic() const { return kind() == Kind::Norm2 || kind() == Kind::TraceRe || kind() == Kind::TraceIm; }
  bool is_quantifier() const { return kind() == Kind::Sup || kind() == Kind::Inf; }

  bool is_quantifier_free() const {
    if (is_quantifier()) return false;
    for (const Formula& c : node_->children)
      if (!c.is_quantifier_free()) return false;
    return true;
  }

  std::set<int> free_vars() const {
    std::set<int> out;
    if (is_atomic()) {
      term().collect_vars(out);
      return out;
    }
    for (const Formula& c : node_->children) {
      auto sub = c.free_vars();
      out.insert(sub.begin(), sub.end());
    }
    if (is_quantifier())
      for (int v : vars()) out.erase(v);
    return out;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.arity() != b.arity() || a.vars() != b.vars() || a.rational() != b.rational())
      return false;
    if (a.is_atomic() && !(a.term() == b.term())) return false;
    for (std::size_t k = 0; k < a.arity(); ++k)
      if (!(a.child(k) == b.child(k))) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::optional<Term> term;
    Rational q{0};
    std::vector<int> vars;
    std::vector<Formula> children;
  };
  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static Formula atom(Kind k, Term t) {
    Node n{k};
    n.term = std::move(t);
    return Formula(std::move(n));
  }
  static Formula binary(Kind k, Formula a, Formula b) {
    Node n{k};
    n.children.push_back(std::move(a));
    n.children.push_back(std::move(b));
    return Formula(std::move(n));
  }
  static Formula quantifier(Kind k, std::vector<int> vars, Formula body) {
    if (vars.empty()) throw InvalidArgument("quantifier needs at least one variable");
    for (int v : vars)
      if (v < 1) throw InvalidArgument("variable index must be >= 1");
    Node n{k};
    n.vars = std::move(vars);
    n.children.push_back(std::move(body));
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

/// Left fold of `op` over a non-empty list.
template <typename Op>
Formula fold(const std::vector<Formula>& items, Op op) {
  if (items.empty()) throw InvalidArgument("cannot fold an empty formula list");
  Formula acc = items.front();
  for (std::size_t k = 1; k < items.size(); ++k) acc = op(acc, items[k]);
  return acc;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {
inline std::string print_formula(const Formula& f, bool top);

inline std::string print_var_list(const std::vector<int>& vars) {
  std::string out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k) out += ", ";
    out += "x" + std::to_string(vars[k]);
  }
  return out;
}

inline std::string print_formula(const Formula& f, bool top) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Norm2:
      return "norm2(" + print_term(f.term()) + ")";
    case K::TraceRe:
      return "trRe(" + print_term(f.term()) + ")";
    case K::TraceIm:
      return "trIm(" + print_term(f.term()) + ")";
    case K::Const:
      return to_string(f.rational());
    case K::Add:
      return "(" + print_formula(f.child(0), false) + " + " + print_formula(f.child(1), false) + ")";
    case K::Mul:
      return "(" + print_formula(f.child(0), false) + " * " + print_formula(f.child(1), false) + ")";
    case K::DotMinus:
      return "(" + print_formula(f.child(0), false) + " -. " + print_formula(f.child(1), false) + ")";
    case K::Max:
      return "max(" + print_formula(f.child(0), true) + ", " + print_formula(f.child(1), true) + ")";
    case K::Min:
      return "min(" + print_formula(f.child(0), true) + ", " + print_formula(f.child(1), true) + ")";
    case K::Half:
      return "half(" + print_formula(f.child(0), true) + ")";
    case K::Scale: {
      const Formula& c = f.child();
      std::string inner = print_formula(c, false);
      if (c.kind() == K::Const || c.kind() == K::Scale) inner = "(" + inner + ")";
      return to_string(f.rational()) + " " + inner;
    }
    case K::Sup:
    case K::Inf: {
      std::string s = std::string(f.kind() == K::Sup ? "sup " : "inf ") + print_var_list(f.vars()) + " . " +
                      print_formula(f.child(), true);
      return top ? s : "(" + s + ")";
    }
  }
  return {};
}
}  // namespace detail

/// Canonical text in the formula grammar; `parse_formula(print_formula(f)) == f`.
inline std::string print_formula(const Formula& f) { return detail::print_formula(f, true); }

// ---------------------------------------------------------------------------
// Classification

enum class Classification { QuantifierFree, Universal, Existential, Mixed };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::QuantifierFree:
      return "quantifier-free";
    case Classification::Universal:
      return "universal";
    case Classification::Existential:
      return "existential";
    case Classification::Mixed:
      return "mixed";
  }
  return {};
}

/// Strips an outer prenex block of quantifiers of kind `k`, collecting the
/// bound variables in order of appearance.
inline Formula strip_prenex(const Formula& f, Formula::Kind k, std::vector<int>& vars) {
  Formula cur = f;
  while (cur.kind() == k) {
    for (int v : cur.vars())
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    cur = cur.child();
  }
  return cur;
}

/// Shape of a formula's quantifier structure; free variables are ignored.
inline Classification classify_shape(const Formula& f) {
  if (f.is_quantifier_free()) return Classification::QuantifierFree;
  std::vector<int> vars;
  if (f.kind() == Formula::Kind::Sup && strip_prenex(f, Formula::Kind::Sup, vars).is_quantifier_free())
    return Classification::Universal;
  vars.clear();
  if (f.kind() == Formula::Kind::Inf && strip_prenex(f, Formula::Kind::Inf, vars).is_quantifier_free())
    return Classification::Existential;
  return Classification::Mixed;
}

/// A formula without free variables together with its classification.
class Sentence {
 public:
  explicit Sentence(Formula f) : formula_(std::move(f)) {
    auto fv = formula_.free_vars();
    if (!fv.empty()) {
      std::string names;
      for (int v : fv) names += (names.empty() ? "x" : ", x") + std::to_string(v);
      throw ValidationError("free-variable", "sentence has free variables: " + names);
    }
    classification_ = classify_shape(formula_);
  }

  const Formula& formula() const { return formula_; }
  Classification classification() const { return classification_; }

  /// Quantified variables of the prenex block (empty when quantifier-free).
  std::vector<int> bound_vars() const {
    std::vector<int> vars;
    if (classification_ == Classification::Universal) strip_prenex(formula_, Formula::Kind::Sup, vars);
    if (classification_ == Classification::Existential) strip_prenex(formula_, Formula::Kind::Inf, vars);
    return vars;
  }

  /// Quantifier-free matrix of the prenex block.
  Formula body() const {
    std::vector<int> vars;
    if (classification_ == Classification::Universal) return strip_prenex(formula_, Formula::Kind::Sup, vars);
    if (classification_ == Classification::Existential) return strip_prenex(formula_, Formula::Kind::Inf, vars);
    return formula_;
  }

 private:
  Formula formula_;
  Classification classification_;
};

/// Throws ValidationError("free-variable") when `f` is not a sentence.
inline Classification classify(const Formula& f) { return Sentence(f).classification(); }

// ---------------------------------------------------------------------------
// Connective semantics

/// x -. y = max(x - y, 0).
inline double dotminus(double a, double b) { return std::max(a - b, 0.0); }

// ---------------------------------------------------------------------------
// Modulus of continuity

/// Operator-norm bound of a term over contraction assignments.
inline double term_bound(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var:
    case K::One:
      return 1.0;
    case K::Zero:
      return 0.0;
    case K::Adjoint:
      return term_bound(t.child());
    case K::Sum:
      return term_bound(t.child(0)) + term_bound(t.child(1));
    case K::Prod:
      return term_bound(t.child(0)) * term_bound(t.child(1));
    case K::Scale:
      return std::abs(t.coefficient().to_complex()) * term_bound(t.child());
  }
  return 0.0;
}

/// Lipschitz constant of a term in the 2-norm with respect to the l1-of-2-norm
/// metric on contraction assignments. Products use
/// ||st - s't'||_2 <= ||s||_op ||t - t'||_2 + ||s - s'||_2 ||t'||_op.
inline double term_lipschitz(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var:
      return 1.0;
    case K::One:
    case K::Zero:
      return 0.0;
    case K::Adjoint:
      return term_lipschitz(t.child());
    case K::Sum:
      return term_lipschitz(t.child(0)) + term_lipschitz(t.child(1));
    case K::Prod:
      return term_bound(t.child(0)) * term_lipschitz(t.child(1)) +
             term_lipschitz(t.child(0)) * term_bound(t.child(1));
    case K::Scale:
      return std::abs(t.coefficient().to_complex()) * term_lipschitz(t.child());
  }
  return 0.0;
}

/// Bound on |f| over contraction assignments.
inline double formula_bound(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Norm2:
    case K::TraceRe:
    case K::TraceIm:
      return term_bound(f.term());
    case K::Const:
      return to_double(f.rational());
    case K::Add:
    case K::DotMinus:
      return formula_bound(f.child(0)) + formula_bound(f.child(1));
    case K::Mul:
      return formula_bound(f.child(0)) * formula_bound(f.child(1));
    case K::Max:
    case K::Min:
      return std::max(formula_bound(f.child(0)), formula_bound(f.child(1)));
    case K::Half:
      return formula_bound(f.child()) / 2.0;
    case K::Scale:
      return to_double(f.rational()) * formula_bound(f.child());
    case K::Sup:
    case K::Inf:
      return formula_bound(f.child());
  }
  return 0.0;
}

/// Structural Lipschitz constant of a quantifier-free formula: atoms inherit
/// the term constant (tau and ||.||_2 are 1-Lipschitz for ||.||_2), sums add,
/// scaling multiplies, -. adds, max/min take the larger, products use the
/// range bounds of their factors.
inline double formula_lipschitz(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Norm2:
    case K::TraceRe:
    case K::TraceIm:
      return term_lipschitz(f.term());
    case K::Const:
      return 0.0;
    case K::Add:
    case K::DotMinus:
      return formula_lipschitz(f.child(0)) + formula_lipschitz(f.child(1));
    case K::Mul:
      return formula_bound(f.child(0)) * formula_lipschitz(f.child(1)) +
             formula_lipschitz(f.child(0)) * formula_bound(f.child(1));
    case K::Max:
    case K::Min:
      return std::max(formula_lipschitz(f.child(0)), formula_lipschitz(f.child(1)));
    case K::Half:
      return formula_lipschitz(f.child()) / 2.0;
    case K::Scale:
      return to_double(f.rational()) * formula_lipschitz(f.child());
    case K::Sup:
    case K::Inf:
      throw Unsupported("modulus of continuity requested for a quantified formula");
  }
  return 0.0;
}

/// delta(eps) such that |f(u) - f(v)| <= eps whenever u, v are contraction
/// assignments with sum_k ||u_k - v_k||_2 <= delta(eps).
class Modulus {
 public:
  explicit Modulus(double lipschitz) : lipschitz_(lipschitz) {}

  double lipschitz() const { return lipschitz_; }

  double operator()(double eps) const {
    if (eps <= 0.0) return 0.0;
    if (lipschitz_ == 0.0) return std::numeric_limits<double>::infinity();
    return eps / lipschitz_;
  }

  /// Smallest eps the modulus guarantees at input distance `delta`.
  double error_at(double delta) const { return lipschitz_ * delta; }

 private:
  double lipschitz_;
};

inline Modulus modulus_of_continuity(const Formula& f) {
  if (!f.is_quantifier_free()) throw Unsupported("modulus of continuity requested for a quantified formula");
  return Modulus(formula_lipschitz(f));
}

}  // namespace tracial
