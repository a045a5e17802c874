// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "amrkit/aligner.h"
#include "amrkit/corpus.h"
#include "amrkit/logging.h"
#include "amrkit/oracle.h"
#include "amrkit/parser.h"
#include "amrkit/penman.h"
#include "amrkit/smatch.h"
#include "brute_force.h"
#include "test_support.h"

using namespace amrkit;
using amrkit::testing::BruteForceCandidates;
using amrkit::testing::Fixture;
using amrkit::testing::SpansOf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char *name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::vector<CorpusDocument> Corpus() { return ReadCorpusFile(Fixture("corpus.amr")); }

bool Derivable(const CorpusDocument &d) { return d.meta.Get("derivable") != "no"; }

struct Resources {
  LemmaTable lemmas = LoadLemmas(Fixture("lemmas.tsv"));
  EmbeddingTable embeddings = LoadEmbeddings(Fixture("embeddings.txt"));
  MorphLinkTable morph = LoadMorphosemantic(Fixture("morphosemantic.tsv"));
  AlignResources Base() const { return {&lemmas}; }
  AlignResources Extended() const { return {&lemmas, &embeddings, &morph}; }
};

const Resources &Res() {
  static const Resources r;
  return r;
}

std::string Num(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

Outcome RoundTrip() {
  std::vector<CorpusDocument> docs = Corpus();
  std::vector<CorpusDocument> extra = ReadCorpusFile(Fixture("extended.amr"));
  docs.insert(docs.end(), extra.begin(), extra.end());
  std::size_t exact = 0;
  for (const CorpusDocument &d : docs) {
    AmrGraph back = ParsePenman(SerializePenman(*d.graph));
    if (Smatch(back, *d.graph).f1 == 1.0) ++exact;
  }
  return {docs.size() >= 25 && exact == docs.size(),
          std::to_string(exact) + "/" + std::to_string(docs.size()) + " graphs exact"};
}

// Random pair: a base graph plus a perturbed copy, so that matches are
// partial and mappings are not trivial.
AmrGraph RandomGraph(std::mt19937_64 &rng, std::size_t vars) {
  static const std::vector<std::string> labels = {"a", "b", "c"};
  static const std::vector<std::string> roles = {":ARG0", ":ARG1", ":mod"};
  AmrGraph g;
  for (std::size_t i = 0; i < vars; ++i) {
    g.AddConcept("v" + std::to_string(i), labels[rng() % labels.size()]);
  }
  g.SetRoot(0);
  for (std::size_t i = 1; i < vars; ++i) g.AddRelation(rng() % i, i, roles[rng() % roles.size()]);
  for (int extra = static_cast<int>(rng() % 3); extra > 0; --extra) {
    NodeId s = rng() % vars, t = rng() % vars;
    std::string role = roles[rng() % roles.size()];
    if (s != t && !g.HasRelation(s, t, role)) g.AddRelation(s, t, role);
  }
  if (rng() % 2) g.AddRelation(rng() % vars, g.AddLiteral("-", LiteralKind::kSymbol), ":polarity");
  return g;
}

Outcome SmatchEquivalence() {
  std::mt19937_64 rng(2024);
  int equal = 0, exceeded = 0;
  const int pairs = 200;
  for (int i = 0; i < pairs; ++i) {
    AmrGraph x = RandomGraph(rng, 1 + rng() % 5);
    AmrGraph y = RandomGraph(rng, 1 + rng() % 5);
    double hill = Smatch(x, y, SmatchOptions{4, 1}).f1;
    double exact = ExhaustiveSmatch(x, y).f1;
    if (std::abs(hill - exact) <= 1e-9) ++equal;
    if (hill > exact + 1e-9) ++exceeded;
  }
  return {equal >= 0.95 * pairs && exceeded == 0,
          std::to_string(equal) + "/" + std::to_string(pairs) + " equal, " +
              std::to_string(exceeded) + " above exhaustive"};
}

Outcome OracleCompleteness() {
  std::size_t pairs = 0, full = 0, replayed = 0;
  for (const CorpusDocument &d : Corpus()) {
    if (!Derivable(d)) continue;
    ++pairs;
    CandidateAlignment a = ParseAlignment(*d.graph, d.meta.Get("alignments"));
    OracleRun run = RunOracle(d.tokens, *d.graph, a);
    if (run.score.f1 == 1.0) ++full;
    ParserState s = InitialState(d.tokens);
    for (const Action &act : run.actions) ApplyInPlace(s, act);
    if (IsTerminal(s) && SerializePenman(ExtractGraph(s)) == SerializePenman(run.parsed)) {
      ++replayed;
    }
  }
  return {pairs >= 15 && full == pairs && replayed == pairs,
          std::to_string(full) + "/" + std::to_string(pairs) + " at F1 1.0, " +
              std::to_string(replayed) + " replayed byte-for-byte"};
}

Outcome BruteForceEquivalence() {
  AlignerOptions unlimited;
  unlimited.limit = 0;
  std::size_t checked = 0, agree = 0;
  std::vector<CorpusDocument> docs = Corpus();
  std::vector<CorpusDocument> extra = ReadCorpusFile(Fixture("extended.amr"));
  docs.insert(docs.end(), extra.begin(), extra.end());
  for (bool extended : {false, true}) {
    AlignResources res = extended ? Res().Extended() : Res().Base();
    for (const CorpusDocument &d : docs) {
      AlignmentSet set =
          EnumerateAlignments(*d.graph, d.tokens, CombinedRuleSet(extended), res, unlimited);
      if (set.heads.size() > 4) continue;
      bool small = true;
      for (const auto &r : set.records) small = small && r.size() <= 3;
      if (!small) continue;
      ++checked;
      std::set<amrkit::testing::SpanVector> got;
      for (const CandidateAlignment &c : set.candidates) got.insert(SpansOf(set.heads, c));
      if (got.size() == set.candidates.size() &&
          got == BruteForceCandidates(set.heads, set.records)) {
        ++agree;
      }
    }
  }
  return {checked > 0 && agree == checked,
          std::to_string(agree) + "/" + std::to_string(checked) + " fixture inputs agree"};
}

Outcome TunerBehavior() {
  CorpusDocument d;
  for (CorpusDocument &doc : Corpus()) {
    if (doc.id == "fig1") d = doc;
  }
  const AmrGraph &g = *d.graph;
  AlignmentSet set = EnumerateAlignments(g, d.tokens, CombinedRuleSet(true), Res().Extended());
  CandidateAlignment gold = ParseAlignment(g, d.meta.Get("alignments"));
  NodeId nuclear_act = NodeByAddress(g, "0.1.0");
  NodeId nuclear_reactor = NodeByAddress(g, "0.2.0.1");
  std::optional<std::size_t> coherent, swapped;
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const CandidateAlignment &c = set.candidates[i];
    if (c.SameSpans(gold)) coherent = i;
    if (c.SpanOf(nuclear_act) == gold.SpanOf(nuclear_reactor) &&
        c.SpanOf(nuclear_reactor) == gold.SpanOf(nuclear_act)) {
      CandidateAlignment rest = c;
      rest.records.erase(nuclear_act);
      rest.records.erase(nuclear_reactor);
      CandidateAlignment gold_rest = gold;
      gold_rest.records.erase(nuclear_act);
      gold_rest.records.erase(nuclear_reactor);
      if (rest.SameSpans(gold_rest)) swapped = i;
    }
  }
  if (!coherent || !swapped) {
    return {false, "aligner did not produce both nuclear candidates (" +
                       std::to_string(set.candidates.size()) + " candidates)"};
  }
  TuneResult t = Tune(d.tokens, g, set.candidates);
  const OracleRun &a = t.runs[*coherent];
  const OracleRun &b = t.runs[*swapped];
  std::size_t cache_a = CountActions(a.actions, ActionTag::kCache);
  std::size_t cache_b = CountActions(b.actions, ActionTag::kCache);
  bool pass = a.score.f1 == 1.0 && b.score.f1 == 1.0 && t.best == *coherent &&
              a.action_count < b.action_count && cache_a < cache_b;
  return {pass, "coherent " + std::to_string(a.action_count) + " actions/" +
                    std::to_string(cache_a) + " cache, swapped " +
                    std::to_string(b.action_count) + "/" + std::to_string(cache_b) +
                    ", F1 " + Num(a.score.f1) + "/" + Num(b.score.f1) + ", selected " +
                    std::to_string(t.best)};
}

struct TrainedFixture {
  std::vector<CorpusDocument> docs;
  std::vector<TrainingExample> examples;
  std::vector<double> oracle_f1;
  std::optional<ActionScorer> model;
};

TrainedFixture TrainTen() {
  TrainedFixture out;
  for (const CorpusDocument &d : Corpus()) {
    if (!Derivable(d)) continue;
    if (out.docs.size() == 10) break;
    AlignmentSet set = EnumerateAlignments(*d.graph, d.tokens, CombinedRuleSet(true),
                                           Res().Extended());
    TuneResult t = Tune(d.tokens, *d.graph, set.candidates);
    out.docs.push_back(d);
    out.examples.push_back({d.id, d.tokens, d.pos, t.run.actions});
    out.oracle_f1.push_back(t.run.score.f1);
  }
  TrainOptions o;
  o.epochs = 10;
  o.lemmas = &Res().lemmas;
  out.model.emplace(Train(out.examples, o).model);
  return out;
}

const TrainedFixture &Trained() {
  static const TrainedFixture t = TrainTen();
  return t;
}

Outcome Trainability() {
  const TrainedFixture &t = Trained();
  double accuracy = ActionAccuracy(*t.model, t.examples, &Res().lemmas);
  std::size_t reached = 0;
  for (std::size_t i = 0; i < t.docs.size(); ++i) {
    ParseResult p = Parse(*t.model, t.docs[i].tokens, ParseInputs{t.docs[i].pos, &Res().lemmas});
    if (std::abs(Smatch(p.graph, *t.docs[i].graph).f1 - t.oracle_f1[i]) <= 1e-9) ++reached;
  }
  return {t.docs.size() == 10 && accuracy >= 0.99 && reached >= 9,
          "accuracy " + Num(accuracy) + ", " + std::to_string(reached) + "/" +
              std::to_string(t.docs.size()) + " parses at oracle F1"};
}

Outcome EnsembleProperties() {
  const TrainedFixture &t = Trained();
  auto m = std::make_shared<ActionScorer>(*t.model);
  TrainOptions o;
  o.epochs = 3;
  o.seed = 7;
  o.lemmas = &Res().lemmas;
  auto other = std::make_shared<ActionScorer>(Train(t.examples, o).model);
  Ensemble single({m});
  Ensemble pair({m, other});
  ParseOptions record;
  record.record_steps = true;
  std::size_t identical = 0, sentences = 0, steps = 0, normalized = 0;
  for (const CorpusDocument &d : Corpus()) {
    ++sentences;
    ParseInputs in{d.pos, &Res().lemmas};
    if (Parse(single, d.tokens, in).actions == Parse(*m, d.tokens, in).actions) ++identical;
    for (const Ensemble *e : {&single, &pair}) {
      for (const DecodeStep &s : Parse(*e, d.tokens, in, record).steps) {
        ++steps;
        double sum = std::accumulate(s.probabilities.begin(), s.probabilities.end(), 0.0);
        if (std::abs(sum - 1.0) <= 1e-9) ++normalized;
      }
    }
  }
  return {identical == sentences && normalized == steps && steps > 0,
          std::to_string(identical) + "/" + std::to_string(sentences) + " identical traces, " +
              std::to_string(normalized) + "/" + std::to_string(steps) + " steps sum to 1"};
}

bool Recalls(const AlignmentSet &set, const CorpusDocument &d, const std::string &word,
             const std::string &label) {
  for (const CandidateAlignment &c : set.candidates) {
    for (const auto &[head, rec] : c.records) {
      if (d.graph->concept_at(head).label == label && rec.span.length() == 1 &&
          d.tokens[rec.span.start] == word) {
        return true;
      }
    }
  }
  return false;
}

Outcome ExtendedRecall() {
  std::vector<CorpusDocument> docs = ReadCorpusFile(Fixture("extended.amr"));
  const std::vector<std::pair<std::string, std::string>> pairs = {{"example", "exemplify-01"},
                                                                   {"actions", "act-01"}};
  std::size_t base_hits = 0, extended_hits = 0;
  for (const auto &[word, label] : pairs) {
    for (const CorpusDocument &d : docs) {
      if (std::find(d.tokens.begin(), d.tokens.end(), word) == d.tokens.end()) continue;
      AlignmentSet base =
          EnumerateAlignments(*d.graph, d.tokens, CombinedRuleSet(false), Res().Base());
      AlignmentSet ext =
          EnumerateAlignments(*d.graph, d.tokens, CombinedRuleSet(true), Res().Extended());
      base_hits += Recalls(base, d, word, label);
      extended_hits += Recalls(ext, d, word, label);
    }
  }
  return {base_hits == 0 && extended_hits == pairs.size(),
          "base recalls " + std::to_string(base_hits) + "/2, extended " +
              std::to_string(extended_hits) + "/2"};
}

}  // namespace

int main() {
  SetWarningsEnabled(false);
  const std::vector<Criterion> criteria = {
      {"AC1 penman round trip", 1, RoundTrip},
      {"AC2 smatch hill climbing vs exhaustive", 30, SmatchEquivalence},
      {"AC3 oracle completeness and replay", 5, OracleCompleteness},
      {"AC4 candidate search vs brute force", 5, BruteForceEquivalence},
      {"AC5 tuner prefers the coherent nuclear alignment", 1, TunerBehavior},
      {"AC6 trainability on ten sentences", 60, Trainability},
      {"AC7 ensemble properties", 60, EnsembleProperties},
      {"AC8 extended rule recall", 5, ExtendedRecall},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass && seconds < c.budget_seconds;
    if (o.pass && !pass) o.detail += ", over the time budget";
    failed += !pass;
    std::printf("%s %s: %s (%.3fs, budget %.0fs)\n", pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), seconds, c.budget_seconds);
  }
  return failed == 0 ? 0 : 1;
}
