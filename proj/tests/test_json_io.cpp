#include <gtest/gtest.h>

#include "support.hpp"
#include "tracial/json_io.hpp"

using namespace tracial;
using nlohmann::json;

TEST(JsonIO, MatrixAndTupleRoundTrip) {
  Rng rng(1);
  const MatrixTuple t = random_contraction_tuple(3, {1, 2, 3}, rng);
  const json j = json_io::to_json(t);
  const MatrixTuple back = json_io::tuple_from_json(json::parse(j.dump()));
  EXPECT_TRUE(back == t);
  EXPECT_EQ(json_io::to_json(back), j);
}

TEST(JsonIO, PVMTupleRoundTripAndFlatForm) {
  Rng rng(2);
  const PVMTuple t = random_pvm_tuple(2, 2, 3, rng);
  const json j = json_io::to_json(t);
  const PVMTuple back = json_io::pvm_tuple_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.groups.size(), 2u);
  for (int v = 0; v < 2; ++v)
    for (int i = 0; i < 3; ++i) EXPECT_EQ(back.groups[v][i], t.groups[v][i]);

  const json flat = json_io::to_json(to_matrix_tuple(t));
  json with_shape = flat;
  with_shape["n"] = 2;
  with_shape["m"] = 3;
  const PVMTuple from_flat = json_io::pvm_tuple_from_json(with_shape);
  for (int v = 0; v < 2; ++v)
    for (int i = 0; i < 3; ++i) EXPECT_EQ(from_flat.groups[v][i], t.groups[v][i]);
}

TEST(JsonIO, GameRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    NonlocalGame g = random_synchronous_game(2 + trial % 2, 2 + trial % 3, rng);
    g.name = "g" + std::to_string(trial);
    const json j = json_io::to_json(g);
    const NonlocalGame back = json_io::game_from_json(json::parse(j.dump()));
    EXPECT_EQ(json_io::to_json(back), j);
    EXPECT_EQ(deterministic_value(back).value, deterministic_value(g).value);
  }
}

TEST(JsonIO, GameValidation) {
  json j = json_io::to_json(complete_graph_coloring(3, 3));
  j["mu"][0][1] = "1/2";
  try {
    json_io::game_from_json(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "invalid-game");
  }
  json broken = json_io::to_json(complete_graph_coloring(3, 3));
  broken.erase("D");
  try {
    json_io::game_from_json(broken);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "invalid-input");
  }
}

TEST(JsonIO, FormulaRoundTrip) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Formula f = testsupport::random_formula(rng, 1 + static_cast<int>(uniform_index(rng, 5)));
    const json j = json_io::to_json(f);
    EXPECT_TRUE(json_io::formula_from_json(json::parse(j.dump())) == f) << print_formula(f);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Term t = testsupport::random_term(rng, 4, 3);
    EXPECT_TRUE(json_io::term_from_json(json_io::to_json(t)) == t);
  }
}

TEST(JsonIO, GraphWithWeights) {
  const json j = json::parse(R"({"adjacency": [[1], [0, 2], [1]], "weights": [[0, "1/6", 0], ["1/6", 0, "1/3"], [0, "1/3", 0]]})");
  const json_io::Graph g = json_io::graph_from_json(j);
  ASSERT_TRUE(g.weights.has_value());
  const NonlocalGame game = coloring_game(g.adjacency, 2, g.weights);
  EXPECT_EQ(deterministic_value(game).value, Rational(1));
  EXPECT_THROW(json_io::graph_from_json(json::parse(R"({"adjacency": [[1], [0]], "weights": [[0]]})")),
               ValidationError);
  const json_io::Graph unnormalized = json_io::graph_from_json(json::parse(R"({"adjacency": [[1], [0]], "weights": [[0, 1], [1, 0]]})"));
  EXPECT_THROW(coloring_game(unnormalized.adjacency, 2, unnormalized.weights), ValidationError);
}

TEST(JsonIO, RationalsAcceptStringsAndIntegers) {
  EXPECT_EQ(json_io::rational_from_json(json("3/6")), Rational(1, 2));
  EXPECT_EQ(json_io::rational_from_json(json(2)), Rational(2));
  EXPECT_EQ(json_io::rational_to_json(Rational(-4, 6)), json("-2/3"));
}
