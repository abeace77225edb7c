#pragma once

// JSON encodings of matrices, tuples, games, formulas and results.
//
//   matrix      {"p": 2, "re": [[..],[..]], "im": [[..],[..]]}        (row-major)
//   tuple       {"p": 2, "matrices": [matrix, ...]}                   (x1, x2, ...)
//   PVM tuple   {"p": 2, "n": 3, "m": 2, "groups": [[matrix, ...], ...]}
//   game        {"n": 3, "m": 3, "mu": [["1/9", ...]], "D": [[[[0/1]]]]}
//   graph       {"adjacency": [[1, 2], [0, 2], [0, 1]], "weights": [["1/9", ...]]?}
//
// Rationals are written as "p/q" strings (or "p" for integers).

#include <string>
#include <vector>

#include <json.hpp>

#include "tracial/errors.hpp"
#include "tracial/evaluator.hpp"
#include "tracial/formula.hpp"
#include "tracial/games.hpp"
#include "tracial/matrix.hpp"
#include "tracial/moments.hpp"
#include "tracial/nets.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"

namespace tracial::json_io {

using nlohmann::json;

/// Runs `fn`, turning malformed-document exceptions into invalid-input errors.
template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError("invalid-input", what + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ValidationError("invalid-input", what + ": " + e.what());
  }
}

inline json rational_to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ValidationError("invalid-input", "rational must be a \"p/q\" string or an integer");
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Matrices and tuples

inline json to_json(const ComplexMatrix& a) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      rr.push_back(a(r, c).real());
      ri.push_back(a(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"p", a.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    const int p = j.at("p").get<int>();
    if (p < 1) throw ValidationError("invalid-input", "matrix dimension must be >= 1");
    const json& re = j.at("re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (re.size() != static_cast<std::size_t>(p) || (im && im->size() != static_cast<std::size_t>(p)))
      throw ValidationError("dimension-mismatch", "matrix rows do not match p");
    ComplexMatrix a(p, p);
    for (int r = 0; r < p; ++r) {
      if (re[r].size() != static_cast<std::size_t>(p) || (im && (*im)[r].size() != static_cast<std::size_t>(p)))
        throw ValidationError("dimension-mismatch", "matrix columns do not match p");
      for (int c = 0; c < p; ++c) a(r, c) = Complex(re[r][c].get<double>(), im ? (*im)[r][c].get<double>() : 0.0);
    }
    return a;
  });
}

/// Tuples are written densely as x1..xk; gaps are not representable.
inline json to_json(const MatrixTuple& t) {
  json mats = json::array();
  const auto vars = t.variables();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] != static_cast<int>(k) + 1) throw InvalidArgument("tuple variables must be x1..xk to serialize");
    mats.push_back(to_json(t.at(vars[k])));
  }
  return json{{"p", t.dim()}, {"matrices", std::move(mats)}};
}

inline MatrixTuple tuple_from_json(const json& j) {
  return guarded("tuple", [&] {
    MatrixTuple t(j.at("p").get<int>());
    int k = 1;
    for (const json& m : j.at("matrices")) {
      ComplexMatrix a = matrix_from_json(m);
      if (a.rows() != t.dim()) throw ValidationError("dimension-mismatch", "tuple member has the wrong dimension");
      t.set(k++, std::move(a));
    }
    return t;
  });
}

inline json to_json(const PVMTuple& t) {
  json groups = json::array();
  for (const auto& g : t.groups) {
    json jg = json::array();
    for (const auto& a : g) jg.push_back(to_json(a));
    groups.push_back(std::move(jg));
  }
  return json{{"p", t.dim}, {"n", t.questions()}, {"m", t.answers()}, {"groups", std::move(groups)}};
}

/// Accepts the grouped form, or the flat tuple form with "n" and "m".
inline PVMTuple pvm_tuple_from_json(const json& j) {
  return guarded("PVM tuple", [&] {
    if (!j.contains("groups")) return group_tuple(tuple_from_json(j), j.at("n").get<int>(), j.at("m").get<int>());
    PVMTuple t{j.at("p").get<int>(), {}};
    for (const json& jg : j.at("groups")) {
      std::vector<ComplexMatrix> g;
      for (const json& m : jg) {
        g.push_back(matrix_from_json(m));
        if (g.back().rows() != t.dim) throw ValidationError("dimension-mismatch", "PVM member has the wrong dimension");
      }
      if (!t.groups.empty() && g.size() != t.groups.front().size())
        throw ValidationError("dimension-mismatch", "PVM groups must have equal size");
      t.groups.push_back(std::move(g));
    }
    if (t.groups.empty()) throw ValidationError("invalid-input", "PVM tuple has no groups");
    return t;
  });
}

// ---------------------------------------------------------------------------
// Games and graphs

inline json to_json(const NonlocalGame& g) {
  const int n = g.questions(), m = g.answers();
  json mu = json::array(), d = json::array();
  for (int v = 0; v < n; ++v) {
    json row = json::array(), dv = json::array();
    for (int w = 0; w < n; ++w) {
      row.push_back(rational_to_json(g.mu(v, w)));
      json dw = json::array();
      for (int i = 0; i < m; ++i) {
        json di = json::array();
        for (int jj = 0; jj < m; ++jj) di.push_back(g.wins(v, w, i, jj) ? 1 : 0);
        dw.push_back(std::move(di));
      }
      dv.push_back(std::move(dw));
    }
    mu.push_back(std::move(row));
    d.push_back(std::move(dv));
  }
  json out{{"n", n}, {"m", m}, {"mu", std::move(mu)}, {"D", std::move(d)}};
  if (!g.name.empty()) out["name"] = g.name;
  return out;
}

inline NonlocalGame game_from_json(const json& j) {
  NonlocalGame g = guarded("game", [&] {
    const int n = j.at("n").get<int>(), m = j.at("m").get<int>();
    if (n < 1 || m < 1) throw ValidationError("invalid-game", "n and m must be >= 1");
    NonlocalGame out(n, m);
    if (j.contains("name")) out.name = j.at("name").get<std::string>();
    const json& mu = j.at("mu");
    const json& d = j.at("D");
    if (mu.size() != static_cast<std::size_t>(n) || d.size() != static_cast<std::size_t>(n))
      throw ValidationError("invalid-game", "mu and D must have n rows");
    for (int v = 0; v < n; ++v) {
      if (mu[v].size() != static_cast<std::size_t>(n) || d[v].size() != static_cast<std::size_t>(n))
        throw ValidationError("invalid-game", "mu and D must be n x n");
      for (int w = 0; w < n; ++w) {
        out.set_mu(v, w, rational_from_json(mu[v][w]));
        if (d[v][w].size() != static_cast<std::size_t>(m)) throw ValidationError("invalid-game", "D(v,w) must be m x m");
        for (int i = 0; i < m; ++i) {
          if (d[v][w][i].size() != static_cast<std::size_t>(m))
            throw ValidationError("invalid-game", "D(v,w) must be m x m");
          for (int jj = 0; jj < m; ++jj) {
            const json& x = d[v][w][i][jj];
            out.set_wins(v, w, i, jj, x.is_boolean() ? x.get<bool>() : x.get<int>() != 0);
          }
        }
      }
    }
    return out;
  });
  g.validate();
  return g;
}

struct Graph {
  std::vector<std::vector<int>> adjacency;
  std::optional<std::vector<std::vector<Rational>>> weights;
};

inline Graph graph_from_json(const json& j) {
  return guarded("graph", [&] {
    Graph g;
    g.adjacency = j.at("adjacency").get<std::vector<std::vector<int>>>();
    if (j.contains("weights")) {
      std::vector<std::vector<Rational>> w;
      for (const json& row : j.at("weights")) {
        std::vector<Rational> r;
        for (const json& x : row) r.push_back(rational_from_json(x));
        w.push_back(std::move(r));
      }
      if (w.size() != g.adjacency.size()) throw ValidationError("invalid-input", "weights must be n x n");
      for (const auto& r : w)
        if (r.size() != g.adjacency.size()) throw ValidationError("invalid-input", "weights must be n x n");
      g.weights = std::move(w);
    }
    return g;
  });
}

// ---------------------------------------------------------------------------
// Terms and formulas

inline json to_json(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Var: return json{{"kind", "var"}, {"index", t.var_index()}};
    case K::One: return json{{"kind", "one"}};
    case K::Zero: return json{{"kind", "zero"}};
    case K::Adjoint: return json{{"kind", "adjoint"}, {"arg", to_json(t.child())}};
    case K::Sum: return json{{"kind", "sum"}, {"args", json::array({to_json(t.child(0)), to_json(t.child(1))})}};
    case K::Prod: return json{{"kind", "prod"}, {"args", json::array({to_json(t.child(0)), to_json(t.child(1))})}};
    case K::Scale:
      return json{{"kind", "scale"},
                  {"re", rational_to_json(t.coefficient().re)},
                  {"im", rational_to_json(t.coefficient().im)},
                  {"arg", to_json(t.child())}};
  }
  return {};
}

inline Term term_from_json(const json& j) {
  return guarded("term", [&]() -> Term {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "var") return Term::var(j.at("index").get<int>());
    if (k == "one") return Term::one();
    if (k == "zero") return Term::zero();
    if (k == "adjoint") return Term::adjoint(term_from_json(j.at("arg")));
    if (k == "sum") return Term::sum(term_from_json(j.at("args").at(0)), term_from_json(j.at("args").at(1)));
    if (k == "prod") return Term::prod(term_from_json(j.at("args").at(0)), term_from_json(j.at("args").at(1)));
    if (k == "scale")
      return Term::scale(ComplexRational(rational_from_json(j.at("re")), rational_from_json(j.at("im"))),
                         term_from_json(j.at("arg")));
    throw ValidationError("invalid-input", "unknown term kind '" + k + "'");
  });
}

inline const char* kind_name(Formula::Kind k) {
  using K = Formula::Kind;
  switch (k) {
    case K::Norm2: return "norm2";
    case K::TraceRe: return "trRe";
    case K::TraceIm: return "trIm";
    case K::Const: return "const";
    case K::Add: return "add";
    case K::Mul: return "mul";
    case K::Scale: return "scale";
    case K::DotMinus: return "dotminus";
    case K::Max: return "max";
    case K::Min: return "min";
    case K::Half: return "half";
    case K::Sup: return "sup";
    case K::Inf: return "inf";
  }
  return "";
}

inline json to_json(const Formula& f) {
  json out{{"kind", kind_name(f.kind())}};
  if (f.is_atomic()) out["term"] = to_json(f.term());
  if (f.kind() == Formula::Kind::Const || f.kind() == Formula::Kind::Scale) out["q"] = rational_to_json(f.rational());
  if (f.is_quantifier()) out["vars"] = f.vars();
  if (f.arity() > 0) {
    json args = json::array();
    for (std::size_t k = 0; k < f.arity(); ++k) args.push_back(to_json(f.child(k)));
    out["args"] = std::move(args);
  }
  return out;
}

inline Formula formula_from_json(const json& j) {
  return guarded("formula", [&]() -> Formula {
    const std::string k = j.at("kind").get<std::string>();
    auto arg = [&](std::size_t i) { return formula_from_json(j.at("args").at(i)); };
    if (k == "norm2") return Formula::norm2(term_from_json(j.at("term")));
    if (k == "trRe") return Formula::trace_re(term_from_json(j.at("term")));
    if (k == "trIm") return Formula::trace_im(term_from_json(j.at("term")));
    if (k == "const") return Formula::constant(rational_from_json(j.at("q")));
    if (k == "add") return Formula::add(arg(0), arg(1));
    if (k == "mul") return Formula::mul(arg(0), arg(1));
    if (k == "scale") return Formula::scale(rational_from_json(j.at("q")), arg(0));
    if (k == "dotminus") return Formula::dotminus(arg(0), arg(1));
    if (k == "max") return Formula::max(arg(0), arg(1));
    if (k == "min") return Formula::min(arg(0), arg(1));
    if (k == "half") return Formula::half(arg(0));
    if (k == "sup") return Formula::sup(j.at("vars").get<std::vector<int>>(), arg(0));
    if (k == "inf") return Formula::inf(j.at("vars").get<std::vector<int>>(), arg(0));
    throw ValidationError("invalid-input", "unknown formula kind '" + k + "'");
  });
}

// ---------------------------------------------------------------------------
// Results

inline json to_json(const NetSpec& s) {
  return json{{"space", s.space == NetSpace::MatrixBall ? "matrix-ball" : "disk-power"},
              {"mesh", rational_to_json(s.mesh)},
              {"covering_radius", s.covering_radius},
              {"cardinality", s.cardinality}};
}

inline json to_json(const Diagnostics& d) {
  return json{{"iterations", d.iterations}, {"accepted", d.accepted},     {"restarts", d.restarts},
              {"evaluations", d.evaluations}, {"seed", d.seed}, {"best_branch", d.best_branch}};
}

inline json to_json(const EvalResult& r) {
  json out{{"value", r.value}, {"bound_kind", to_string(r.bound_kind)}, {"diagnostics", to_json(r.diagnostics)}};
  if (r.bound_kind == BoundKind::NetBoundWithGap) out["gap"] = r.gap;
  if (r.certificate && !r.certificate->variables().empty()) out["certificate"] = to_json(*r.certificate);
  if (r.net) out["net"] = to_json(*r.net);
  return out;
}

inline json to_json(const GameValueReport& r) {
  json out{{"game_id", r.game_id},
           {"p", r.p},
           {"lower_bound", r.lower_bound},
           {"certificate", to_json(r.certificate)},
           {"synchronicity_residual", r.synchronicity_residual},
           {"rank_patterns", r.patterns},
           {"exhaustive_patterns", r.exhaustive_patterns},
           {"diagnostics", to_json(r.diagnostics)}};
  out["classical_value"] = r.classical_value ? json(rational_to_json(*r.classical_value)) : json(nullptr);
  return out;
}

inline json to_json(const SynchronousCorrelation& c) {
  json values = json::array();
  for (int v = 0; v < c.n; ++v) {
    json jv = json::array();
    for (int w = 0; w < c.n; ++w) {
      json jw = json::array();
      for (int i = 0; i < c.m; ++i) {
        json ji = json::array();
        for (int j = 0; j < c.m; ++j) ji.push_back(c(v, w, i, j));
        jw.push_back(std::move(ji));
      }
      jv.push_back(std::move(jw));
    }
    values.push_back(std::move(jv));
  }
  return json{{"n", c.n}, {"m", c.m}, {"p", std::move(values)},
              {"synchronicity_residual", c.synchronicity_residual()}};
}

inline json to_json(const RoundingResult& r) {
  return json{{"pvm", to_json(r.pvm)},
              {"phi", r.phi},
              {"distance", r.distance},
              {"constant", r.constant},
              {"warnings", r.warnings}};
}

inline json to_json(const MomentVector& mv) {
  json values = json::array(), monomials = json::array();
  for (const Complex& z : mv.values) values.push_back(complex_to_json(z));
  for (const StarMonomial& m : mv.monomials()) monomials.push_back(m.to_string());
  return json{{"n", mv.n}, {"d", mv.d}, {"values", std::move(values)}, {"monomials", std::move(monomials)}};
}

inline json to_json(const NetBound& b) {
  return json{{"r", b.r},
              {"gap", b.gap},
              {"lipschitz", b.lipschitz},
              {"certificate", to_json(b.certificate)},
              {"net", to_json(b.spec)}};
}

}  // namespace tracial::json_io
