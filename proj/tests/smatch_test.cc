#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "amrkit/penman.h"
#include "amrkit/smatch.h"
#include "test_support.h"

using namespace amrkit;
using amrkit::testing::CodeOf;

TEST_CASE("triples flip inverse roles and add TOP") {
  TripleSet t = ToTriples(ParsePenman("(b / boy :ARG0-of (g / go-01) :quant 2)"));
  CHECK(t.instances.size() == 2);
  REQUIRE(t.relations.size() == 1);
  CHECK(t.relations[0].role == ":ARG0");
  CHECK(t.relations[0].source == 1);
  CHECK(t.relations[0].target == 0);
  // TOP plus :quant
  CHECK(t.attributes.size() == 2);
  CHECK(t.size() == 5);
}

TEST_CASE("inverse and forward spellings score identically") {
  AmrGraph a = ParsePenman("(b / boy :ARG0-of (g / go-01))");
  AmrGraph b = ParsePenman("(g / go-01 :ARG0 (b / boy))");
  // Only the TOP triple differs.
  SmatchResult r = ExhaustiveSmatch(a, b);
  CHECK(r.matched == 3);
  CHECK(r.test_total == 4);
}

TEST_CASE("subset graph gives the hand-counted precision and recall") {
  AmrGraph gold = ParsePenman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-01 :ARG0 b))");
  AmrGraph test = ParsePenman("(w / want-01 :ARG0 (b / boy))");
  // gold: 3 instances, TOP, 3 relations = 7; test: 2 instances, TOP, 1 relation = 4
  SmatchResult r = Smatch(test, gold);
  CHECK(r.matched == 4);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.recall == doctest::Approx(4.0 / 7.0));
  CHECK(r.f1 == doctest::Approx(2 * 4.0 / 7.0 / (1 + 4.0 / 7.0)));
}

TEST_CASE("score from counts") {
  CHECK(ScoreFromCounts(0, 0, 0).f1 == 1.0);
  CHECK(ScoreFromCounts(0, 3, 0).f1 == 0.0);
  SmatchResult r = ScoreFromCounts(2, 4, 2);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("identical graphs score 1 and are symmetric") {
  const char *text = "(a / a1 :ARG0 (b / b1 :ARG1 (d / d1)) :ARG1 (c / c1 :ARG2 d))";
  AmrGraph g = ParsePenman(text);
  CHECK(Smatch(g, g).f1 == 1.0);
  AmrGraph h = ParsePenman("(a / a1 :ARG0 (b / b1) :ARG1 (c / c1))");
  CHECK(Smatch(g, h).f1 == doctest::Approx(Smatch(h, g).f1));
}

TEST_CASE("hill climbing never beats the exhaustive search") {
  const std::vector<std::string> labels = {"a", "b", "c"};
  const std::vector<std::string> roles = {":ARG0", ":ARG1"};
  std::mt19937_64 rng(7);
  auto random_graph = [&] {
    AmrGraph g;
    std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      g.AddConcept("v" + std::to_string(i), labels[rng() % labels.size()]);
    }
    g.SetRoot(0);
    for (std::size_t i = 1; i < n; ++i) {
      g.AddRelation(rng() % i, i, roles[rng() % roles.size()]);
    }
    return g;
  };
  for (int i = 0; i < 50; ++i) {
    AmrGraph x = random_graph(), y = random_graph();
    CHECK(Smatch(x, y).f1 <= ExhaustiveSmatch(x, y).f1 + 1e-12);
  }
}

TEST_CASE("exhaustive search refuses large graphs") {
  std::string text = "(v0 / a";
  for (int i = 1; i <= 9; ++i) text += " :ARG0 (v" + std::to_string(i) + " / a)";
  text += ")";
  AmrGraph g = ParsePenman(text);
  CHECK(CodeOf([&] { ExhaustiveSmatch(g, g); }) == ErrorCode::kSize);
}
