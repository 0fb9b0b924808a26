#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace qradon;
using testsupport::Rng;

TEST_CASE("parser handles leaves and join nodes") {
  CHECK(expr_equal(parse_expr("K1"), GraphExpr::k(1)));
  const ExprPtr k5 = parse_expr("J(K2,K1,K1,K1)");
  REQUIRE(k5->kind == GraphExpr::Kind::Join);
  CHECK(k5->children.size() == 4);
  const ExprPtr k33 = parse_expr("J(U(K1,K1,K1),K1,K1,K1)");
  REQUIRE(k33->kind == GraphExpr::Kind::Join);
  CHECK(k33->children.size() == 4);
  CHECK(k33->children[0]->kind == GraphExpr::Kind::Union);
  CHECK(k33->children[0]->children.size() == 3);
}

TEST_CASE("parser desugars multipliers and ignores whitespace") {
  CHECK(expr_equal(parse_expr("3*K2"), parse_expr("U(K2,K2,K2)")));
  CHECK(expr_equal(parse_expr(" J( K2 , K1 ,K1, K1 ) "), parse_expr("J(K2,K1,K1,K1)")));
  CHECK(expr_equal(parse_expr("2*J(K1,K2)"), parse_expr("U(J(K1,K2),J(K1,K2))")));
}

TEST_CASE("parser reports the byte offset of errors") {
  auto offset_of = [](const std::string& text) {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      return static_cast<long long>(e.offset());
    }
    return -1LL;
  };
  CHECK(offset_of("J(K2,K1") >= 7);   // missing ')'
  CHECK(offset_of("Q3") == 0);        // unknown head
  CHECK(offset_of("J(K2,,K1)") == 5); // empty operand
  CHECK_THROWS_AS(parse_expr("K0"), Error);
  CHECK_THROWS_AS(parse_expr("B(0,2)"), Error);
  CHECK_THROWS_AS(parse_expr("0*K1"), ParseError);
  CHECK_THROWS_AS(parse_expr("file(g.json)"), ParseError);  // no loader wired
}

TEST_CASE("realize produces the expected graphs") {
  const Graph k5 = realize(parse_expr("J(K2,K1,K1,K1)"));
  CHECK(k5.n == 5);
  CHECK(k5.edge_count() == 10);

  const Graph k33 = realize(parse_expr("B(3,3)"));
  CHECK(k33.n == 6);
  CHECK(k33.edge_count() == 9);
  CHECK(k33 == Graph::complete_bipartite(3, 3));

  const Graph star = realize(parse_expr("J(K1,U(K1,K1,K1))"));
  CHECK(star.n == 4);
  CHECK(star.edge_count() == 3);
  CHECK(star.degree(0) == 3);
}

TEST_CASE("realize invariants on random expressions") {
  Rng rng(2001);
  for (int i = 0; i < 200; ++i) {
    const ExprPtr a = testsupport::random_expr(rng, testsupport::rand_int(rng, 1, 5));
    const ExprPtr b = testsupport::random_expr(rng, testsupport::rand_int(rng, 1, 5));
    const Graph ga = realize(a), gb = realize(b);
    const Graph join = realize(GraphExpr::join({a, b}));
    CHECK(join.n == ga.n + gb.n);
    CHECK(join.edge_count() == ga.edge_count() + gb.edge_count() + ga.n * gb.n);
    const Graph uni = realize(GraphExpr::disjoint_union({a, b}));
    CHECK(uni.n == ga.n + gb.n);
    CHECK(uni.edge_count() == ga.edge_count() + gb.edge_count());
    for (const auto& [u, v] : uni.edges) CHECK((v < ga.n || u >= ga.n));  // no cross edges
  }
}

TEST_CASE("print then parse is the identity") {
  Rng rng(2002);
  for (int i = 0; i < 100; ++i) {
    const std::string text = testsupport::random_expr_string(rng);
    const ExprPtr e = parse_expr(text);
    CHECK(expr_equal(parse_expr(print_expr(e)), e));
  }
}

TEST_CASE("subgraph embedding finds and refuses correctly") {
  CHECK(subgraph_embed(Graph::cycle(4), Graph::complete(4)).has_value());
  CHECK(subgraph_embed(Graph::complete_bipartite(1, 3), Graph::complete_bipartite(3, 3)).has_value());
  CHECK_FALSE(subgraph_embed(Graph::complete(3), Graph::complete_bipartite(3, 3)).has_value());
  CHECK_THROWS_AS(subgraph_embed(Graph::complete(13), Graph::complete(13)), SizeLimitError);
}

TEST_CASE("found embeddings carry edges to edges") {
  Rng rng(2003);
  int found = 0;
  for (int i = 0; i < 200; ++i) {
    const Graph g = testsupport::random_graph(rng, 2, 5, 0.4);
    const Graph h = testsupport::random_graph(rng, 4, 8, 0.6);
    const auto emb = subgraph_embed(g, h);
    if (!emb) continue;
    ++found;
    CHECK(check_embedding(g, h, *emb));
  }
  CHECK(found > 20);
}

TEST_CASE("graph JSON round trip") {
  Graph g = Graph::complete_bipartite(1, 3);
  g.names = {"c", "x", "y", "z"};
  const Json j = graph_to_json(g);
  const Graph back = graph_from_json(j);
  CHECK(back == g);
  CHECK(back.names == g.names);
  CHECK_THROWS_AS(graph_from_json(Json{{"vertices", Json::array({"a", "a"})}, {"edges", Json::array()}}),
                  InputError);
}
