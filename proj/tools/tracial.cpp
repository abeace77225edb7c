// Command-line front end. Every command writes one JSON document to stdout
// (or --out); errors go to stderr as JSON and select the exit code:
//   0 ok, 1 usage, 2 parse error, 3 unsupported, 4 budget exceeded,
//   5 validation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracial/tracial.hpp"

namespace {

using nlohmann::json;
using namespace tracial;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int p = 1;
  std::string mesh;
  int restarts = 8;
  int iters = 2000;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 1'000'000;
  std::optional<double> tol;
  std::optional<std::string> beta;
  int threads = 1;
  std::string out;

  std::uint64_t require_seed(const std::string& command) const {
    if (!seed) throw ValidationError("config-invalid", command + " is stochastic and needs --seed");
    return *seed;
  }

  OptimizerConfig optimizer(const std::string& command) const {
    OptimizerConfig cfg;
    cfg.p = p;
    cfg.restarts = restarts;
    cfg.max_iterations = iters;
    cfg.seed = require_seed(command);
    cfg.threads = threads;
    cfg.validate();
    return cfg;
  }
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  const std::string text = read_input(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid-input", path + ": " + e.what());
  }
}

/// Formula files may carry '#' comment lines.
std::string read_formula_text(const std::string& path) {
  std::istringstream in(read_input(path));
  std::string line, out;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line.clear();
    out += line + "\n";
  }
  return out;
}

void emit(const RunConfig& rc, const std::string& text) {
  if (rc.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(rc.out);
  if (!f) throw UsageError("cannot write '" + rc.out + "'");
  f << text;
}

void emit(const RunConfig& rc, const json& j) { emit(rc, j.dump(2) + "\n"); }

Rational parse_rational_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const InvalidArgument&) {
    throw ValidationError("config-invalid", flag + " must be a rational such as 1/20 or 0.05");
  }
}

// ---------------------------------------------------------------------------
// Commands

void cmd_parse(const RunConfig& rc, const std::string& file, bool reprint) {
  const Formula f = parse_formula(read_formula_text(file));
  if (reprint) {
    emit(rc, print_formula(f) + "\n");
    return;
  }
  json out{{"text", print_formula(f)}, {"ast", json_io::to_json(f)}, {"classification", to_string(classify(f))}};
  out["free_vars"] = f.free_vars();
  emit(rc, out);
}

void cmd_eval(const RunConfig& rc, const std::string& file) {
  const Sentence s(parse_formula(read_formula_text(file)));
  OptimizerConfig cfg;
  if (s.classification() == Classification::QuantifierFree) {
    cfg.p = rc.p;
    cfg.seed = rc.seed.value_or(0);
  } else if (s.classification() == Classification::Mixed) {
    eval_sentence(s, cfg);  // throws unsupported-classification
  } else {
    cfg = rc.optimizer("eval");
  }
  json out = json_io::to_json(eval_sentence(s, cfg));
  out["sentence"] = print_formula(s.formula());
  out["classification"] = to_string(s.classification());
  out["p"] = cfg.p;
  emit(rc, out);
}

NonlocalGame load_game(const std::string& file) {
  NonlocalGame g = json_io::game_from_json(read_json(file));
  if (g.name.empty()) g.name = std::filesystem::path(file).stem().string();
  return g;
}

void cmd_game_value(const RunConfig& rc, const std::string& file) {
  const NonlocalGame g = load_game(file);
  const OptimizerConfig cfg = rc.optimizer("game-value");
  if (!rc.beta) {
    emit(rc, json_io::to_json(synchronous_value_lower_bound(g, rc.p, cfg)));
    return;
  }
  const RelaxedGameResult r = relaxed_game_value(g, rc.p, parse_rational_flag("--beta", *rc.beta), cfg);
  emit(rc, json{{"game_id", g.name},
                {"p", rc.p},
                {"beta", *rc.beta},
                {"relaxed", json_io::to_json(r.relaxed)},
                {"rounded_value", r.rounded_value},
                {"rounding", json_io::to_json(r.rounding)}});
}

void cmd_game_classical(const RunConfig& rc, const std::string& file) {
  const NonlocalGame g = load_game(file);
  const DeterministicResult d = deterministic_value(g, rc.budget);
  emit(rc, json{{"game_id", g.name},
                {"value", to_string(d.value)},
                {"value_float", to_double(d.value)},
                {"assignment", d.assignment}});
}

void cmd_gen_coloring(const RunConfig& rc, const std::string& file, int colors) {
  const json_io::Graph graph = json_io::graph_from_json(read_json(file));
  NonlocalGame g = coloring_game(graph.adjacency, colors, graph.weights);
  g.name = std::filesystem::path(file).stem().string() + "-" + std::to_string(colors) + "-coloring";
  emit(rc, json_io::to_json(g));
}

void cmd_round_pvm(const RunConfig& rc, const std::string& file) {
  const PVMTuple t = json_io::pvm_tuple_from_json(read_json(file));
  emit(rc, json_io::to_json(round_to_pvm(t, rc.tol.value_or(0.1))));
}

void cmd_correlation(const RunConfig& rc, const std::string& file, const std::string& game_file) {
  const PVMTuple t = json_io::pvm_tuple_from_json(read_json(file));
  const SynchronousCorrelation c = correlation_from_pvms(t);
  json out = json_io::to_json(c);
  if (!game_file.empty()) out["game_value"] = game_value(load_game(game_file), c);
  emit(rc, out);
}

void cmd_moments(const RunConfig& rc, const std::string& file, int d) {
  emit(rc, json_io::to_json(moment_map(json_io::tuple_from_json(read_json(file)), d)));
}

void cmd_net_bound(const RunConfig& rc, const std::string& file, const std::string& csv) {
  const Sentence s(parse_formula(read_formula_text(file)));
  std::ofstream csv_out;
  NetBoundOptions opts;
  opts.budget = rc.budget;
  opts.threads = rc.threads;
  if (!csv.empty()) {
    csv_out.open(csv);
    if (!csv_out) throw UsageError("cannot write '" + csv + "'");
    csv_out << "point_index,body_value\n";
    csv_out.precision(17);
    opts.on_point = [&](std::uint64_t i, double v) { csv_out << i << ',' << v << '\n'; };
  }
  NetBound b;
  if (rc.mesh.empty() && rc.tol) b = net_lower_bound_within(s, rc.p, *rc.tol, opts);
  else b = net_lower_bound(s, rc.p, parse_rational_flag("--mesh", rc.mesh.empty() ? "1/10" : rc.mesh), opts);
  json out = json_io::to_json(b);
  out["sentence"] = print_formula(s.formula());
  out["p"] = rc.p;
  emit(rc, out);
}

void cmd_density(const RunConfig& rc, int n, int d, int p_small, int p_large, int samples) {
  OptimizerConfig cfg = rc.optimizer("density");
  const DensityGapResult r = density_gap(n, d, p_small, p_large, samples, cfg);
  json distances = json::array();
  for (const auto& s : r.samples) distances.push_back(s.distance);
  emit(rc, json{{"n", n},
                {"d", d},
                {"p_small", p_small},
                {"p_large", p_large},
                {"samples", samples},
                {"seed", cfg.seed},
                {"gap", r.gap},
                {"distances", distances}});
}

void report_error(const std::string& code, const std::string& message, std::optional<std::size_t> position = {}) {
  json e{{"error", code}, {"message", message}};
  if (position) e["position"] = *position;
  std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-logic sentences over matrix algebras, synchronous games and trace moments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");

  RunConfig rc;
  app.add_option("--p", rc.p, "Matrix dimension")->check(CLI::PositiveNumber);
  app.add_option("--mesh", rc.mesh, "Net mesh as a rational (e.g. 1/20)");
  app.add_option("--restarts", rc.restarts, "Random restarts of the optimizer")->check(CLI::PositiveNumber);
  app.add_option("--iters", rc.iters, "Iterations per restart")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", rc.seed, "Seed (required by stochastic commands)");
  app.add_option("--budget", rc.budget, "Largest net or search size allowed")->check(CLI::PositiveNumber);
  app.add_option("--tol", rc.tol, "Tolerance (round-pvm: largest PVM residual; net-bound: target gap)");
  app.add_option("--beta", rc.beta, "Penalty slope; makes game-value run the penalized relaxation");
  app.add_option("--threads", rc.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--out", rc.out, "Write the JSON result here instead of stdout");

  std::string file = "-";
  bool reprint = false;
  auto* parse = app.add_subcommand("parse", "Parse a formula; print its AST and classification");
  parse->add_option("file", file, "Formula file, or - for stdin");
  parse->add_flag("--reprint", reprint, "Print the canonical text only");

  auto* eval = app.add_subcommand("eval", "Evaluate a sentence in M_p (exact or one-sided bound)");
  eval->add_option("file", file, "Sentence file")->required();

  auto* game_value = app.add_subcommand("game-value", "Lower bound on the synchronous value at dimension p");
  game_value->add_option("game", file, "Game JSON")->required();

  auto* classical = app.add_subcommand("game-classical", "Exact best deterministic strategy value");
  classical->add_option("game", file, "Game JSON")->required();

  int colors = 3;
  auto* gen = app.add_subcommand("gen-coloring", "Graph coloring game from an adjacency-list graph");
  gen->add_option("graph", file, "Graph JSON")->required();
  gen->add_option("--colors", colors, "Number of colors")->check(CLI::PositiveNumber);

  auto* round = app.add_subcommand("round-pvm", "Round a near-PVM tuple to an exact PVM tuple");
  round->add_option("tuple", file, "PVM tuple JSON")->required();

  std::string game_file;
  auto* corr = app.add_subcommand("correlation", "Synchronous correlation of a PVM tuple");
  corr->add_option("tuple", file, "PVM tuple JSON")->required();
  corr->add_option("--game", game_file, "Also report this game's value at the correlation");

  int degree = 4;
  auto* moments = app.add_subcommand("moments", "Trace moments of a tuple up to degree d");
  moments->add_option("tuple", file, "Tuple JSON")->required();
  moments->add_option("--d", degree, "Largest monomial degree")->check(CLI::PositiveNumber);

  std::string csv;
  auto* net = app.add_subcommand("net-bound", "Grid-net value of a universal sentence with its gap");
  net->add_option("file", file, "Sentence file")->required();
  net->add_option("--csv", csv, "Write (point-index, body-value) rows here");

  int n = 1, p_small = 1, p_large = 2, samples = 4;
  auto* density = app.add_subcommand("density", "Largest moment distance from p_large samples to dimension p_small");
  density->add_option("--n", n, "Number of variables")->check(CLI::PositiveNumber);
  density->add_option("--d", degree, "Largest monomial degree")->check(CLI::PositiveNumber);
  density->add_option("--p-small", p_small, "Witness dimension")->check(CLI::PositiveNumber);
  density->add_option("--p-large", p_large, "Sample dimension")->check(CLI::PositiveNumber);
  density->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_exit = app.exit(e);
    return rc_exit == 0 ? 0 : 1;
  }

  try {
    if (parse->parsed()) cmd_parse(rc, file, reprint);
    else if (eval->parsed()) cmd_eval(rc, file);
    else if (game_value->parsed()) cmd_game_value(rc, file);
    else if (classical->parsed()) cmd_game_classical(rc, file);
    else if (gen->parsed()) cmd_gen_coloring(rc, file, colors);
    else if (round->parsed()) cmd_round_pvm(rc, file);
    else if (corr->parsed()) cmd_correlation(rc, file, game_file);
    else if (moments->parsed()) cmd_moments(rc, file, degree);
    else if (net->parsed()) cmd_net_bound(rc, file, csv);
    else if (density->parsed()) cmd_density(rc, n, degree, p_small, p_large, samples);
  } catch (const SyntaxError& e) {
    report_error(e.code(), e.what(), e.position());
    return 2;
  } catch (const Unsupported& e) {
    report_error(e.code(), e.what());
    return 3;
  } catch (const BudgetExceeded& e) {
    report_error(e.code(), e.what());
    return 4;
  } catch (const Error& e) {
    report_error(e.code(), e.what());
    return 5;
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return 1;
  }
  return 0;
}
