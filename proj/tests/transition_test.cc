#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "amrkit/penman.h"
#include "amrkit/smatch.h"
#include "amrkit/transition.h"
#include "test_support.h"

using namespace amrkit;
using amrkit::testing::CodeOf;

namespace {

using Tags = std::set<ActionTag>;

ParserState Run(const std::vector<std::string> &tokens, const std::vector<std::string> &trace) {
  ParserState s = InitialState(tokens);
  for (const std::string &a : trace) ApplyInPlace(s, ParseAction(a));
  return s;
}

std::string OneLine(const AmrGraph &g) {
  SerializeOptions o;
  o.single_line = true;
  return SerializePenman(g, o);
}

}  // namespace

TEST_CASE("action text round trip") {
  for (int i = 0; i < kNumActionTags; ++i) {
    ActionTag tag = static_cast<ActionTag>(i);
    CHECK(ParseActionTag(ActionTagName(tag)) == tag);
  }
  CHECK(FormatAction({ActionTag::kLeft, ":ARG0"}) == "LEFT(:ARG0)");
  CHECK(FormatAction({ActionTag::kShift, ""}) == "SHIFT");
  CHECK(ParseAction("CONFIRM(\"Paris\")") == Action{ActionTag::kConfirm, "\"Paris\""});
  CHECK(ParseAction("ENTITY(country)") == Action{ActionTag::kEntity, "country"});
  CHECK(CodeOf([] { ParseAction("JUMP"); }) == ErrorCode::kFormat);
  CHECK(CodeOf([] { ParseAction("SHIFT(x)"); }) == ErrorCode::kFormat);
  CHECK(CodeOf([] { ParseAction("LEFT"); }) == ErrorCode::kFormat);
}

TEST_CASE("legal actions follow the item kinds") {
  ParserState s = InitialState({"The", "girl", "sleeps"});
  CHECK(LegalActions(s) == Tags{ActionTag::kDrop, ActionTag::kMerge, ActionTag::kConfirm,
                                ActionTag::kEntity});
  ApplyInPlace(s, ParseAction("DROP"));
  ApplyInPlace(s, ParseAction("CONFIRM(girl)"));
  CHECK(LegalActions(s) == Tags{ActionTag::kNew, ActionTag::kShift});
  ApplyInPlace(s, ParseAction("SHIFT"));
  // word at b0 with a concept on the stack
  CHECK(LegalActions(s) == Tags{ActionTag::kDrop, ActionTag::kConfirm, ActionTag::kEntity,
                                ActionTag::kCache, ActionTag::kReduce});
  ApplyInPlace(s, ParseAction("CONFIRM(sleep-01)"));
  CHECK(LegalActions(s) == Tags{ActionTag::kNew, ActionTag::kShift, ActionTag::kLeft,
                                ActionTag::kRight, ActionTag::kCache, ActionTag::kReduce});
}

TEST_CASE("a short derivation builds the expected graph") {
  ParserState s = Run({"The", "girl", "sleeps", "."},
                      {"DROP", "CONFIRM(girl)", "SHIFT", "CONFIRM(sleep-01)", "LEFT(:ARG0)",
                       "REDUCE", "SHIFT", "DROP", "REDUCE"});
  REQUIRE(IsTerminal(s));
  AmrGraph g = ExtractGraph(s);
  CHECK(ExhaustiveSmatch(g, ParsePenman("(s / sleep-01 :ARG0 (g / girl))")).f1 == 1.0);
  CHECK(s.history.size() == 9);
}

TEST_CASE("right arc points from the stack to the buffer") {
  ParserState s = Run({"boy", "go"}, {"CONFIRM(go-01)", "SHIFT", "CONFIRM(boy)", "RIGHT(:ARG0)",
                                      "SHIFT", "REDUCE", "REDUCE"});
  CHECK(OneLine(ExtractGraph(s)) == "(c0 / go-01 :ARG0 (c1 / boy))");
}

TEST_CASE("cache moves s0 to the deque and shift restores it below b0") {
  ParserState s = Run({"a", "b"}, {"CONFIRM(x)", "SHIFT", "CONFIRM(y)", "CACHE"});
  CHECK(s.sigma.empty());
  REQUIRE(s.delta.size() == 1);
  CHECK(s.derived.concept_at(s.delta.front().node).label == "x");
  ApplyInPlace(s, ParseAction("SHIFT"));
  CHECK(s.delta.empty());
  REQUIRE(s.sigma.size() == 2);
  CHECK(s.derived.concept_at(s.sigma[0].node).label == "x");
  CHECK(s.derived.concept_at(s.sigma[1].node).label == "y");
}

TEST_CASE("cache keeps deque order across several items") {
  ParserState s = Run({"a", "b", "c"}, {"CONFIRM(x)", "SHIFT", "CONFIRM(y)", "SHIFT",
                                        "CONFIRM(z)", "CACHE", "CACHE", "SHIFT"});
  REQUIRE(s.sigma.size() == 3);
  CHECK(s.derived.concept_at(s.sigma[0].node).label == "x");
  CHECK(s.derived.concept_at(s.sigma[1].node).label == "y");
  CHECK(s.derived.concept_at(s.sigma[2].node).label == "z");
}

TEST_CASE("merge joins words and entity builds a named entity") {
  ParserState s = InitialState({"North", "Korea", "froze"});
  ApplyInPlace(s, ParseAction("MERGE"));
  REQUIRE(s.b0()->words == std::vector<std::string>{"North", "Korea"});
  CHECK(*s.b0()->span == Span{0, 2});
  ApplyInPlace(s, ParseAction("ENTITY(country)"));
  REQUIRE(s.b0()->is_concept());
  CHECK(s.derived.concept_at(s.b0()->node).label == "country");
  ApplyInPlace(s, ParseAction("SHIFT"));
  ApplyInPlace(s, ParseAction("CONFIRM(freeze-01)"));
  ApplyInPlace(s, ParseAction("LEFT(:ARG0)"));
  ApplyInPlace(s, ParseAction("REDUCE"));
  ApplyInPlace(s, ParseAction("SHIFT"));
  ApplyInPlace(s, ParseAction("REDUCE"));
  AmrGraph expected = ParsePenman(
      "(f / freeze-01 :ARG0 (c / country :name (n / name :op1 \"North\" :op2 \"Korea\")))");
  CHECK(ExhaustiveSmatch(ExtractGraph(s), expected).f1 == 1.0);
}

TEST_CASE("entity parts") {
  std::vector<EntityPart> named = EntityParts("city", {"New", "York"});
  REQUIRE(named.size() == 4);
  CHECK(named[0].label == "city");
  CHECK(named[1].label == "name");
  CHECK(named[1].role == ":name");
  CHECK(named[2].label == "New");
  CHECK(named[2].literal == LiteralKind::kString);
  CHECK(named[3].role == ":op2");

  std::vector<EntityPart> date = EntityParts("date-entity", {"May", "3"});
  REQUIRE(date.size() == 3);
  CHECK(date[1].role == ":month");
  CHECK(date[1].label == "5");
  CHECK(date[2].role == ":day");
  CHECK(date[2].label == "3");
}

TEST_CASE("confirm labels pick literal kinds") {
  ParserState s = Run({"not", "Paris"}, {"CONFIRM(-)", "SHIFT", "CONFIRM(\"Paris\")"});
  CHECK(s.derived.concept_at(0).literal == LiteralKind::kSymbol);
  CHECK(s.derived.concept_at(1).literal == LiteralKind::kString);
  CHECK(s.derived.concept_at(1).label == "Paris");
  CHECK(IsConstantAtom("-"));
  CHECK(IsConstantAtom("42"));
  CHECK_FALSE(IsConstantAtom("boy"));
  CHECK_FALSE(IsConstantAtom(""));
}

TEST_CASE("illegal actions raise transition errors") {
  ParserState s = InitialState({"a"});
  CHECK(CodeOf([&] { ApplyInPlace(s, ParseAction("SHIFT")); }) == ErrorCode::kTransition);
  CHECK(CodeOf([&] { ApplyInPlace(s, ParseAction("LEFT(:ARG0)")); }) == ErrorCode::kTransition);
  CHECK(CodeOf([&] { ApplyInPlace(s, ParseAction("MERGE")); }) == ErrorCode::kTransition);
  ParserState t = Run({"a", "b"}, {"CONFIRM(x)", "SHIFT", "CONFIRM(y)", "LEFT(:ARG0)"});
  CHECK_FALSE(IsLegal(t, ParseAction("LEFT(:ARG0)")));
  CHECK(IsLegal(t, ParseAction("LEFT(:ARG1)")));
  ParserState lit = Run({"a", "b"}, {"CONFIRM(-)", "SHIFT", "CONFIRM(y)"});
  CHECK_FALSE(IsLegal(lit, ParseAction("RIGHT(:ARG0)")));
  CHECK(IsLegal(lit, ParseAction("LEFT(:polarity)")));
}

TEST_CASE("drop of the last word is refused while the deque holds items") {
  ParserState s = Run({"a", "b"}, {"CONFIRM(x)", "SHIFT", "CACHE"});
  CHECK_FALSE(LegalActions(s).count(ActionTag::kDrop));
  CHECK(CodeOf([&] { ApplyInPlace(s, ParseAction("DROP")); }) == ErrorCode::kTransition);
}

TEST_CASE("apply leaves the input state untouched") {
  ParserState s = InitialState({"a"});
  ParserState t = Apply(s, ParseAction("CONFIRM(x)"));
  CHECK(s.b0()->is_word());
  CHECK(t.b0()->is_concept());
}

TEST_CASE("extract graph adds a multi-sentence root for several roots") {
  ParserState s = Run({"a", "b"}, {"CONFIRM(x)", "SHIFT", "REDUCE", "CONFIRM(y)", "SHIFT",
                                   "REDUCE"});
  AmrGraph g = ExtractGraph(s);
  CHECK(g.concept_at(g.root()).label == "multi-sentence");
  CHECK(g.HasRelation(g.root(), 0, ":snt1"));
  CHECK(g.HasRelation(g.root(), 1, ":snt2"));
  CHECK(CodeOf([] { ExtractGraph(InitialState({"a"})); }) == ErrorCode::kState);
}
