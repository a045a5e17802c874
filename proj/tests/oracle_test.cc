#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "amrkit/oracle.h"
#include "amrkit/penman.h"
#include "test_support.h"

using namespace amrkit;
using amrkit::testing::CodeOf;
using amrkit::testing::Fixture;
using amrkit::testing::FixtureDoc;

namespace {

std::vector<std::string> Trace(const OracleRun &run) {
  std::vector<std::string> out;
  for (const Action &a : run.actions) out.push_back(FormatAction(a));
  return out;
}

OracleRun GoldRun(const std::string &id) {
  const CorpusDocument &d = FixtureDoc(id);
  return RunOracle(d.tokens, *d.graph, ParseAlignment(*d.graph, d.meta.Get("alignments")));
}

}  // namespace

TEST_CASE("single predicate sentence") {
  OracleRun run = GoldRun("sleep");
  CHECK(Trace(run) == std::vector<std::string>{"CONFIRM(sleep-01)", "SHIFT", "REDUCE"});
  CHECK(run.score.f1 == 1.0);
  CHECK(run.action_count == 3);
  CHECK(run.sentence_length == 1);
}

TEST_CASE("left arc sentence with dropped function words") {
  OracleRun run = GoldRun("girl-sleep");
  CHECK(Trace(run) == std::vector<std::string>{"DROP", "CONFIRM(girl)", "SHIFT",
                                               "CONFIRM(sleep-01)", "LEFT(:ARG0)", "REDUCE",
                                               "SHIFT", "DROP", "REDUCE"});
}

TEST_CASE("named entities use merge and entity") {
  OracleRun run = GoldRun("john-paris");
  std::vector<std::string> t = Trace(run);
  CHECK(t.front() == "ENTITY(person)");
  CHECK(std::count(t.begin(), t.end(), "ENTITY(city)") == 1);
  CHECK(run.score.f1 == 1.0);
  OracleRun fig = GoldRun("fig1");
  CHECK(Trace(fig).front() == "MERGE");
  CHECK(Trace(fig)[1] == "ENTITY(country)");
}

TEST_CASE("gold alignments give full score on derivable fixtures") {
  for (const CorpusDocument &d : ReadCorpusFile(Fixture("corpus.amr"))) {
    if (d.meta.Get("derivable") == "no") continue;
    CAPTURE(d.id);
    OracleRun run = RunOracle(d.tokens, *d.graph, ParseAlignment(*d.graph, d.meta.Get("alignments")));
    CHECK(run.usable);
    CHECK(run.score.f1 == 1.0);
  }
}

TEST_CASE("replaying the oracle trace reproduces its graph") {
  for (const char *id : {"fig1", "boy-go", "cat-fish", "koreans"}) {
    CAPTURE(id);
    OracleRun run = GoldRun(id);
    ParserState s = InitialState(FixtureDoc(id).tokens);
    for (const Action &a : run.actions) ApplyInPlace(s, a);
    REQUIRE(IsTerminal(s));
    CHECK(SerializePenman(ExtractGraph(s)) == SerializePenman(run.parsed));
  }
}

TEST_CASE("pruning contracts unaligned chain nodes") {
  AmrGraph g = ParsePenman("(a / a1 :ARG0 (b / b1 :ARG1 (c / c1)))");
  CandidateAlignment al = ParseAlignment(g, "0-1|0 2-3|0.0.0");
  PrunedGraph p = PruneUnaligned(g, al);
  REQUIRE(p.graph.size() == 2);
  REQUIRE(p.graph.relations().size() == 1);
  const Relation &r = p.graph.relations()[0];
  CHECK(p.graph.concept_at(r.source).label == "a1");
  CHECK(p.graph.concept_at(r.target).label == "c1");
  CHECK(r.role == ":ARG0");
  CHECK(p.to_pruned[*g.FindVariable("b")] == kNoNode);
  CHECK(p.spans[r.target] == Span{2, 3});
}

TEST_CASE("unaligned root with one kept child hands over the root") {
  AmrGraph g = ParsePenman("(a / a1 :ARG0 (b / b1 :ARG1 (c / c1)))");
  PrunedGraph p = PruneUnaligned(g, ParseAlignment(g, "0-1|0.0 1-2|0.0.0"));
  CHECK(p.graph.concept_at(p.graph.root()).label == "b1");
  CHECK(p.graph.size() == 2);
}

TEST_CASE("unalignable root makes the run unusable") {
  AmrGraph g = ParsePenman("(a / a1 :ARG0 (b / b1) :ARG1 (c / c1))");
  CandidateAlignment al = ParseAlignment(g, "0-1|0.0 1-2|0.1");
  CHECK(CodeOf([&] { PruneUnaligned(g, al); }) == ErrorCode::kPrune);
  OracleRun run = RunOracle({"x", "y"}, g, al);
  CHECK_FALSE(run.usable);
  CHECK(run.score.f1 == 0.0);
  CHECK_FALSE(run.note.empty());
}

TEST_CASE("tuner prefers score, then fewer actions, then the earlier candidate") {
  const CorpusDocument &d = FixtureDoc("girl-sleep");
  CandidateAlignment good = ParseAlignment(*d.graph, d.meta.Get("alignments"));
  CandidateAlignment partial = ParseAlignment(*d.graph, "2-3|0");
  TuneResult t = Tune(d.tokens, *d.graph, {partial, good, good});
  CHECK(t.best == 1);
  CHECK(t.runs.size() == 3);
  CHECK(t.run.score.f1 == 1.0);
  CHECK(t.runs[0].score.f1 < 1.0);
  TuneResult parallel = Tune(d.tokens, *d.graph, {partial, good, good}, {}, 3);
  CHECK(parallel.best == t.best);
  CHECK(CodeOf([&] { Tune(d.tokens, *d.graph, {}); }) == ErrorCode::kInput);
}

TEST_CASE("action statistics") {
  std::vector<OracleRun> runs(2);
  runs[0].action_count = 3;
  runs[0].sentence_length = 2;
  runs[1].action_count = 5;
  runs[1].sentence_length = 12;
  ActionStats s = ComputeActionStats(runs);
  CHECK(s.mean == 4.0);
  REQUIRE(s.histogram.size() == 2);
  CHECK(s.histogram[0].min_length == 0);
  CHECK(s.histogram[0].max_length == 9);
  CHECK(s.histogram[0].mean_actions == 3.0);
  CHECK(s.histogram[1].min_length == 10);
  CHECK(s.histogram[1].runs == 1);
  CHECK(CodeOf([] { ComputeActionStats({}); }) == ErrorCode::kStats);
  CHECK(CountActions({ParseAction("SHIFT"), ParseAction("DROP"), ParseAction("SHIFT")},
                     ActionTag::kShift) == 2);
}

TEST_CASE("oracle step matches next action") {
  const CorpusDocument &d = FixtureDoc("boy-go");
  Oracle oracle(d.tokens, *d.graph, ParseAlignment(*d.graph, d.meta.Get("alignments")));
  ParserState s = InitialState(d.tokens);
  while (!IsTerminal(s)) {
    Action expected = oracle.NextAction(s);
    CHECK(oracle.Step(s) == expected);
  }
  CHECK(oracle.ledger().marked() == oracle.pruned().graph.relations().size());
}
