#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "amrkit/oracle.h"
#include "amrkit/parser.h"
#include "amrkit/smatch.h"
#include "test_support.h"

using namespace amrkit;
using amrkit::testing::CodeOf;
using amrkit::testing::FixtureDoc;

namespace {

std::vector<Action> Vocab(const std::vector<std::string> &names) {
  std::vector<Action> out;
  for (const std::string &n : names) out.push_back(ParseAction(n));
  return out;
}

TrainingExample Example(const std::string &id) {
  const CorpusDocument &d = FixtureDoc(id);
  OracleRun run = RunOracle(d.tokens, *d.graph, ParseAlignment(*d.graph, d.meta.Get("alignments")));
  return {d.id, d.tokens, d.pos, run.actions};
}

}  // namespace

TEST_CASE("lemma label resolution") {
  LemmaTable l;
  l.Add("froze", "freeze");
  ParseInputs in{{}, &l};
  CHECK(LemmaConceptLabel({"froze"}, in, {"freeze"}) == "freeze-01");
  CHECK(LemmaConceptLabel({"froze"}, in, {}) == "freeze");
  CHECK(LemmaConceptLabel({"Boys"}, ParseInputs{}, {}) == "boys");
}

TEST_CASE("zero weights give a uniform distribution") {
  ActionScorer m(Vocab({"DROP", "CONFIRM(<lemma>)", "CONFIRM(boy)", "SHIFT"}), {}, 1, 8);
  ParserState s = InitialState({"boy"});
  std::vector<Candidate> c = LegalCandidates(s, m.vocab(), {}, m.predicate_bases());
  REQUIRE(c.size() == 3);
  std::vector<double> p = m.Distribution(m.encoder().Encode(s, {}), c);
  for (double x : p) CHECK(x == doctest::Approx(1.0 / 3.0));
  CHECK(CodeOf([&] { m.Distribution({}, {}); }) == ErrorCode::kDecode);
}

TEST_CASE("softmax over two logits") {
  ActionScorer m(Vocab({"DROP", "CONFIRM(boy)"}), {}, 1, 8);
  m.bias(0) = 1.0;
  ParserState s = InitialState({"boy"});
  std::vector<Candidate> c = LegalCandidates(s, m.vocab(), {}, {});
  std::vector<double> p = m.Distribution(m.encoder().Encode(s, {}), c);
  REQUIRE(p.size() == 2);
  double expected = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(p[0] == doctest::Approx(expected));
  CHECK(p[0] == doctest::Approx(0.7311).epsilon(1e-4));
  CHECK(p[1] == doctest::Approx(0.2689).epsilon(1e-4));
}

TEST_CASE("ensemble averages member distributions") {
  auto a = std::make_shared<ActionScorer>(Vocab({"DROP", "CONFIRM(boy)"}), std::set<std::string>{}, 1, 8);
  auto b = std::make_shared<ActionScorer>(*a);
  a->bias(0) = 1.0;
  ParserState s = InitialState({"boy"});
  std::vector<Candidate> c = LegalCandidates(s, a->vocab(), {}, {});
  Ensemble single({a});
  Ensemble pair({a, b});
  std::vector<double> pa = a->Distribution(a->encoder().Encode(s, {}), c);
  std::vector<double> ps = single.Distribution(s, {}, c);
  CHECK(ps == pa);
  std::vector<double> pp = pair.Distribution(s, {}, c);
  CHECK(pp[0] == doctest::Approx((pa[0] + 0.5) / 2));
  CHECK(pp[1] == doctest::Approx((pa[1] + 0.5) / 2));
  CHECK(std::accumulate(pp.begin(), pp.end(), 0.0) == doctest::Approx(1.0));

  auto other = std::make_shared<ActionScorer>(Vocab({"DROP"}), std::set<std::string>{}, 1, 8);
  CHECK(CodeOf([&] { Ensemble({a, other}); }) == ErrorCode::kModel);
  CHECK(CodeOf([&] { Ensemble({}); }) == ErrorCode::kModel);
}

TEST_CASE("model file round trip") {
  TrainOptions o;
  o.epochs = 2;
  o.hash_bits = 12;
  TrainResult r = Train({Example("girl-sleep"), Example("boy-go")}, o);
  std::stringstream buf;
  r.model.Save(buf);
  ActionScorer back = ActionScorer::Load(buf);
  CHECK(back == r.model);
  CHECK(back.hash_bits() == 12);
  std::stringstream bad("not-a-model 1\n");
  CHECK(CodeOf([&] { ActionScorer::Load(bad); }) == ErrorCode::kModel);
  std::stringstream future("amr-parser-model 99\n");
  CHECK(CodeOf([&] { ActionScorer::Load(future); }) == ErrorCode::kModel);
}

TEST_CASE("vocabulary is closed over training labels plus the lemma label") {
  TrainResult r = Train({Example("girl-sleep")}, TrainOptions{});
  const std::vector<Action> &v = r.model.vocab();
  CHECK(std::find(v.begin(), v.end(), Action{ActionTag::kConfirm, kLemmaLabel}) != v.end());
  CHECK(std::find(v.begin(), v.end(), Action{ActionTag::kCache, ""}) != v.end());
  CHECK(std::find(v.begin(), v.end(), Action{ActionTag::kLeft, ":ARG0"}) != v.end());
  CHECK(r.model.predicate_bases().count("sleep"));
  ParseResult p = Parse(r.model, {"The", "dog", "sleeps"}, ParseInputs{});
  for (const Action &a : p.actions) {
    if (a.tag != ActionTag::kConfirm) continue;
    bool known = std::find(v.begin(), v.end(), a) != v.end();
    bool lemma = a.label == "dog" || a.label == "the" || a.label == "sleeps" || a.label == "." ||
                 a.label == "sleep-01";
    CHECK((known || lemma));
  }
}

TEST_CASE("training fits a tiny corpus and decoding reproduces it") {
  std::vector<TrainingExample> corpus = {Example("girl-sleep"), Example("boy-go"),
                                         Example("cat-fish")};
  TrainOptions o;
  o.epochs = 10;
  TrainResult r = Train(corpus, o);
  CHECK(r.epochs.size() == 10);
  CHECK(r.epochs.back().loss < r.epochs.front().loss);
  CHECK(ActionAccuracy(r.model, corpus) == 1.0);
  for (const TrainingExample &ex : corpus) {
    ParseResult p = Parse(r.model, ex.tokens, ParseInputs{});
    CHECK(p.actions == ex.actions);
    CHECK_FALSE(p.guard_triggered);
  }
}

TEST_CASE("training is deterministic for a seed") {
  std::vector<TrainingExample> corpus = {Example("girl-sleep"), Example("boy-go")};
  TrainOptions o;
  o.epochs = 3;
  CHECK(Train(corpus, o).model == Train(corpus, o).model);
}

TEST_CASE("held-out accuracy is reported when requested") {
  std::vector<TrainingExample> corpus = {Example("girl-sleep"), Example("boy-go"),
                                         Example("cat-fish"), Example("sleep")};
  TrainOptions o;
  o.epochs = 2;
  o.holdout_fraction = 0.25;
  TrainResult r = Train(corpus, o);
  CHECK(r.epochs.back().heldout_accuracy >= 0.0);
  CHECK(CodeOf([] { Train({}); }) == ErrorCode::kTraining);
  TrainingExample bad = Example("sleep");
  bad.actions = {ParseAction("SHIFT")};
  CHECK(CodeOf([&] { Train({bad}); }) == ErrorCode::kTraining);
}

TEST_CASE("guard drains a runaway derivation") {
  // A strong NEW bias keeps creating concepts instead of consuming words.
  ActionScorer m(Vocab({"CONFIRM(x)", "NEW(y)", "LEFT(:ARG0)", "SHIFT", "REDUCE", "DROP"}), {},
                 1, 8);
  m.bias(1) = 10.0;
  ParseOptions opts;
  opts.guard_factor = 2;
  ParseResult p = Parse(m, {"a", "b"}, ParseInputs{}, opts);
  CHECK(p.guard_triggered);
  CHECK_FALSE(p.graph.empty());
}

TEST_CASE("recorded decode steps are normalized") {
  TrainResult r = Train({Example("girl-sleep")}, TrainOptions{});
  ParseOptions opts;
  opts.record_steps = true;
  ParseResult p = Parse(r.model, FixtureDoc("girl-sleep").tokens, ParseInputs{}, opts);
  REQUIRE(p.steps.size() == p.actions.size());
  for (const DecodeStep &s : p.steps) {
    CHECK(std::accumulate(s.probabilities.begin(), s.probabilities.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}
