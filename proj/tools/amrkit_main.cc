// amrkit: align, tune, oracle, train, parse, smatch and stats over AMR
// corpus files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "amrkit/aligner.h"
#include "amrkit/corpus.h"
#include "amrkit/error.h"
#include "amrkit/logging.h"
#include "amrkit/oracle.h"
#include "amrkit/parallel.h"
#include "amrkit/parser.h"
#include "amrkit/penman.h"
#include "amrkit/resources.h"
#include "amrkit/smatch.h"
#include "amrkit/text.h"

namespace amrkit {
namespace {

std::string Fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Relative resource paths fall back to $AMRKIT_RESOURCE_DIR.
std::string ResolveResource(const std::string &path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::path(path).is_absolute() || fs::exists(path)) return path;
  if (const char *dir = std::getenv("AMRKIT_RESOURCE_DIR")) {
    fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

std::vector<Block> ReadInput(const std::string &path) {
  if (path == "-") return SentenceBlocks(ReadBlocks(std::cin));
  return SentenceBlocks(ReadBlocksFromFile(path));
}

class Output {
 public:
  explicit Output(const std::string &path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::kIo, "cannot write " + path);
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string Render(const Metadata &meta, const std::vector<std::string> &body) {
  std::ostringstream out;
  WriteBlock(out, meta, body);
  return out.str();
}

void Emit(const std::string &path, const std::vector<std::string> &rendered) {
  Output out(path);
  for (const std::string &r : rendered) out.stream() << r;
  out.stream().flush();
}

CorpusDocument RequireGraph(const Block &b) {
  CorpusDocument doc = ToDocument(b);
  if (!doc.graph) throw Error(ErrorCode::kInput, doc.id + ": no AMR graph");
  if (doc.tokens.empty()) throw Error(ErrorCode::kInput, doc.id + ": no tokens");
  return doc;
}

// ---- align ----

struct AlignFlags {
  std::string input = "-", output = "-";
  std::size_t max_candidates = 50;
  std::size_t per_fragment_cap = 5;
  double cosine_threshold = kDefaultCosineThreshold;
  std::string embeddings, morph, lemmas;
  bool extended = false;
  unsigned jobs = 1;
};

void RunAlign(const AlignFlags &f) {
  if (f.extended && (f.embeddings.empty() || f.morph.empty())) {
    throw Error(ErrorCode::kUsage, "--extended needs --embeddings and --morph");
  }
  std::optional<EmbeddingTable> emb;
  std::optional<MorphLinkTable> morph;
  std::optional<LemmaTable> lemmas;
  if (!f.embeddings.empty()) emb = LoadEmbeddings(ResolveResource(f.embeddings));
  if (!f.morph.empty()) morph = LoadMorphosemantic(ResolveResource(f.morph));
  if (!f.lemmas.empty()) lemmas = LoadLemmas(ResolveResource(f.lemmas));
  AlignResources res{lemmas ? &*lemmas : nullptr, emb ? &*emb : nullptr,
                     morph ? &*morph : nullptr, f.cosine_threshold};
  AlignerOptions options;
  options.limit = f.max_candidates;
  options.per_fragment_cap = f.per_fragment_cap;
  std::vector<Rule> rules = CombinedRuleSet(f.extended);

  std::vector<Block> blocks = ReadInput(f.input);
  std::vector<std::string> out(blocks.size());
  ParallelFor(blocks.size(), f.jobs, [&](std::size_t i) {
    CorpusDocument doc = RequireGraph(blocks[i]);
    AlignmentSet set = EnumerateAlignments(*doc.graph, doc.tokens, rules, res, options);
    Metadata meta = blocks[i].meta;
    if (const std::string *gold = meta.Find("alignments")) meta.Set("gold-alignments", *gold);
    meta.EraseFamily("alignments");
    for (std::size_t k = 0; k < set.candidates.size(); ++k) {
      meta.Set("alignments-" + std::to_string(k + 1), FormatAlignment(*doc.graph, set.candidates[k]));
    }
    out[i] = Render(meta, blocks[i].body);
  });
  Emit(f.output, out);
}

// ---- tune ----

struct TuneFlags {
  std::string input = "-", output = "-", report;
  int restarts = 4;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

std::vector<CandidateAlignment> Candidates(const CorpusDocument &doc) {
  std::vector<CandidateAlignment> out;
  for (const auto &[key, value] : doc.meta.entries()) {
    if (key.rfind("alignments-", 0) == 0 && key != "alignments-gold") {
      out.push_back(ParseAlignment(*doc.graph, value));
    }
  }
  if (out.empty()) {
    if (const std::string *single = doc.meta.Find("alignments")) {
      out.push_back(ParseAlignment(*doc.graph, *single));
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInput, doc.id + ": no alignments to tune");
  return out;
}

void RunTune(const TuneFlags &f) {
  SmatchOptions smatch{f.restarts, f.seed};
  std::vector<Block> blocks = ReadInput(f.input);
  std::vector<std::string> out(blocks.size());
  std::vector<OracleRun> runs(blocks.size());
  ParallelFor(blocks.size(), f.jobs, [&](std::size_t i) {
    CorpusDocument doc = RequireGraph(blocks[i]);
    TuneResult t = Tune(doc.tokens, *doc.graph, Candidates(doc), smatch);
    Metadata meta = blocks[i].meta;
    meta.EraseFamily("alignments");
    meta.Set("alignments", FormatAlignment(*doc.graph, t.alignment));
    meta.Set("oracle-smatch", Fixed(t.run.score.f1));
    meta.Set("oracle-actions", std::to_string(t.run.action_count));
    out[i] = Render(meta, blocks[i].body);
    runs[i] = std::move(t.run);
  });
  Emit(f.output, out);

  double f1 = 0, actions = 0;
  for (const OracleRun &r : runs) {
    f1 += r.score.f1;
    actions += static_cast<double>(r.action_count);
  }
  double n = std::max<double>(1.0, static_cast<double>(runs.size()));
  std::ostringstream report;
  report << "sentences\t" << runs.size() << "\n"
         << "mean-oracle-smatch\t" << Fixed(f1 / n) << "\n"
         << "mean-actions\t" << Fixed(actions / n) << "\n";
  if (f.report.empty()) {
    std::cerr << report.str();
  } else {
    Output r(f.report);
    r.stream() << report.str();
  }
}

// ---- oracle ----

struct OracleFlags {
  std::string input = "-", output = "-";
  int restarts = 4;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

void RunOracleCommand(const OracleFlags &f) {
  SmatchOptions smatch{f.restarts, f.seed};
  std::vector<Block> blocks = ReadInput(f.input);
  std::vector<std::string> out(blocks.size());
  ParallelFor(blocks.size(), f.jobs, [&](std::size_t i) {
    CorpusDocument doc = RequireGraph(blocks[i]);
    const std::string *text = doc.meta.Find("alignments");
    if (!text) throw Error(ErrorCode::kInput, doc.id + ": no `alignments` line (run tune first)");
    OracleRun run = RunOracle(doc.tokens, *doc.graph, ParseAlignment(*doc.graph, *text), smatch);
    Metadata meta = blocks[i].meta;
    meta.Set("oracle-smatch", Fixed(run.score.f1));
    meta.Set("oracle-actions", std::to_string(run.action_count));
    if (!run.usable) meta.Set("oracle-note", run.note);
    std::vector<std::string> body;
    for (const Action &a : run.actions) body.push_back(FormatAction(a));
    out[i] = Render(meta, body);
  });
  Emit(f.output, out);
}

// ---- train ----

struct TrainFlags {
  std::string input = "-", model;
  int epochs = 10;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  int hash_bits = 20;
  double holdout = 0;
  std::string lemmas;
};

std::vector<TrainingExample> ReadTraces(const std::string &path) {
  std::vector<TrainingExample> out;
  for (const Block &b : ReadInput(path)) {
    CorpusDocument doc = ToDocument(b, false);
    if (doc.tokens.empty()) throw Error(ErrorCode::kInput, doc.id + ": no tokens");
    TrainingExample ex{doc.id, doc.tokens, doc.pos, {}};
    for (const std::string &line : b.body) {
      if (!Trim(line).empty()) ex.actions.push_back(ParseAction(line));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void RunTrain(const TrainFlags &f) {
  std::optional<LemmaTable> lemmas;
  if (!f.lemmas.empty()) lemmas = LoadLemmas(ResolveResource(f.lemmas));
  TrainOptions options;
  options.epochs = f.epochs;
  options.learning_rate = f.learning_rate;
  options.seed = f.seed;
  options.hash_bits = f.hash_bits;
  options.holdout_fraction = f.holdout;
  options.lemmas = lemmas ? &*lemmas : nullptr;
  TrainResult result = Train(ReadTraces(f.input), options);
  std::cerr << "epoch\tloss\ttrain-accuracy\theldout-accuracy\n";
  for (const EpochReport &e : result.epochs) {
    std::cerr << e.epoch << '\t' << Fixed(e.loss) << '\t' << Fixed(e.train_accuracy) << '\t'
              << (e.heldout_accuracy < 0 ? std::string("-") : Fixed(e.heldout_accuracy)) << '\n';
  }
  result.model.SaveFile(f.model);
}

// ---- parse ----

struct ParseFlags {
  std::string input = "-", output = "-";
  std::vector<std::string> models;
  std::string lemmas;
  unsigned jobs = 1;
};

void RunParse(const ParseFlags &f) {
  std::vector<std::shared_ptr<const ActionScorer>> members;
  for (const std::string &path : f.models) {
    members.push_back(std::make_shared<ActionScorer>(ActionScorer::LoadFile(path)));
  }
  Ensemble ensemble(std::move(members));
  std::optional<LemmaTable> lemmas;
  if (!f.lemmas.empty()) lemmas = LoadLemmas(ResolveResource(f.lemmas));

  std::vector<Block> blocks = ReadInput(f.input);
  std::vector<std::string> out(blocks.size());
  ParallelFor(blocks.size(), f.jobs, [&](std::size_t i) {
    CorpusDocument doc = ToDocument(blocks[i], false);
    if (doc.tokens.empty()) throw Error(ErrorCode::kInput, doc.id + ": no tokens");
    ParseResult r = Parse(ensemble, doc.tokens, ParseInputs{doc.pos, lemmas ? &*lemmas : nullptr});
    Metadata meta;
    for (const char *key : {"id", "snt", "tok", "pos"}) {
      if (const std::string *v = doc.meta.Find(key)) meta.Set(key, *v);
    }
    if (r.guard_triggered) meta.Set("parser-warning", "step guard reached; state drained");
    out[i] = Render(meta, {SerializePenman(r.graph)});
  });
  Emit(f.output, out);
}

// ---- smatch ----

struct SmatchFlags {
  std::string gold, pred;
  int restarts = 4;
  std::uint64_t seed = 1;
  bool exhaustive = false;
};

void RunSmatch(const SmatchFlags &f) {
  if (f.restarts < 1) throw Error(ErrorCode::kUsage, "--restarts must be at least 1");
  std::vector<CorpusDocument> gold = ReadCorpusFile(f.gold);
  std::vector<CorpusDocument> pred = ReadCorpusFile(f.pred);
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kInput, std::to_string(gold.size()) + " gold graphs but " +
                                       std::to_string(pred.size()) + " predicted graphs");
  }
  std::size_t matched = 0, test = 0, total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].graph || !pred[i].graph) {
      throw Error(ErrorCode::kInput, "block " + std::to_string(i + 1) + " has no graph");
    }
    SmatchResult r = f.exhaustive ? ExhaustiveSmatch(*pred[i].graph, *gold[i].graph)
                                  : Smatch(*pred[i].graph, *gold[i].graph, {f.restarts, f.seed});
    matched += r.matched;
    test += r.test_total;
    total += r.gold_total;
  }
  SmatchResult r = ScoreFromCounts(matched, test, total);
  std::cout << Fixed(r.precision) << '\t' << Fixed(r.recall) << '\t' << Fixed(r.f1) << '\n';
}

// ---- stats ----

struct StatsFlags {
  std::string input = "-", output = "-";
  bool histogram = false;
  std::size_t bucket = 10;
};

void RunStats(const StatsFlags &f) {
  std::vector<OracleRun> runs;
  std::vector<std::string> ids;
  for (const Block &b : ReadInput(f.input)) {
    CorpusDocument doc = ToDocument(b, false);
    OracleRun run;
    run.sentence_length = doc.tokens.size();
    if (const std::string *n = doc.meta.Find("oracle-actions")) {
      try {
        run.action_count = std::stoul(*n);
      } catch (...) {
        throw Error(ErrorCode::kFormat, doc.id + ": bad oracle-actions value '" + *n + "'");
      }
    } else {
      for (const std::string &line : b.body) {
        if (!Trim(line).empty()) ++run.action_count;
      }
    }
    runs.push_back(run);
    ids.push_back(doc.id);
  }
  ActionStats stats = ComputeActionStats(runs, f.bucket);
  Output out(f.output);
  std::ostream &o = out.stream();
  if (f.histogram) {
    o << "min-length\tmax-length\tsentences\tmean-actions\n";
    for (const HistogramBucket &b : stats.histogram) {
      o << b.min_length << '\t' << b.max_length << '\t' << b.runs << '\t' << Fixed(b.mean_actions)
        << '\n';
    }
  } else {
    o << "id\tlength\tactions\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      o << ids[i] << '\t' << runs[i].sentence_length << '\t' << runs[i].action_count << '\n';
    }
  }
  o << "# mean-actions\t" << Fixed(stats.mean) << '\n';
}

int Main(int argc, char **argv) {
  CLI::App app{"AMR alignment, oracle parsing and greedy transition parsing"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  AlignFlags align;
  CLI::App *a = app.add_subcommand("align", "Write candidate alignments (# ::alignments-k)");
  a->add_option("input", align.input, "AMR corpus ('-' for stdin)");
  a->add_option("-o,--output", align.output, "Output file ('-' for stdout)");
  a->add_option("--max-candidates", align.max_candidates, "Candidates per sentence (0 = all)");
  a->add_option("--per-fragment-cap", align.per_fragment_cap,
                "Records kept per fragment when the product is too large");
  a->add_option("--cosine-threshold", align.cosine_threshold, "Semantic match threshold (strict)");
  a->add_option("--embeddings", align.embeddings, "Word vectors, GloVe text layout");
  a->add_option("--morph", align.morph, "Morphosemantic links, form<TAB>base");
  a->add_option("--lemmas", align.lemmas, "Lemma table, form<TAB>lemma[,lemma]");
  a->add_flag("--extended", align.extended, "Enable semantic and morphological rules");
  a->add_option("-j,--jobs", align.jobs, "Worker threads");

  TuneFlags tune;
  CLI::App *t = app.add_subcommand("tune", "Pick the candidate with the best oracle parse");
  t->add_option("input", tune.input, "Aligned corpus ('-' for stdin)");
  t->add_option("-o,--output", tune.output, "Output file");
  t->add_option("--report", tune.report, "Summary file (default: stderr)");
  t->add_option("--restarts", tune.restarts, "Smatch random restarts");
  t->add_option("--seed", tune.seed, "Smatch seed");
  t->add_option("-j,--jobs", tune.jobs, "Worker threads");

  OracleFlags oracle;
  CLI::App *o = app.add_subcommand("oracle", "Export oracle action traces");
  o->add_option("input", oracle.input, "Corpus with one `alignments` line per sentence");
  o->add_option("-o,--output", oracle.output, "Output file");
  o->add_option("--restarts", oracle.restarts, "Smatch random restarts");
  o->add_option("--seed", oracle.seed, "Smatch seed");
  o->add_option("-j,--jobs", oracle.jobs, "Worker threads");

  TrainFlags train;
  CLI::App *tr = app.add_subcommand("train", "Train the action scorer on oracle traces");
  tr->add_option("input", train.input, "Trace file written by `oracle`");
  tr->add_option("-m,--model", train.model, "Model file to write")->required();
  tr->add_option("--epochs", train.epochs, "Passes over the data");
  tr->add_option("--learning-rate", train.learning_rate, "SGD step size");
  tr->add_option("--seed", train.seed, "Shuffling and feature-hash seed");
  tr->add_option("--hash-bits", train.hash_bits, "log2 of the weight table size");
  tr->add_option("--holdout", train.holdout, "Share of sentences held out for accuracy");
  tr->add_option("--lemmas", train.lemmas, "Lemma table for the lemma label fallback");

  ParseFlags parse;
  CLI::App *p = app.add_subcommand("parse", "Parse tokenized sentences into AMR");
  p->add_option("input", parse.input, "Corpus with `# ::tok` lines");
  p->add_option("-o,--output", parse.output, "Output file");
  p->add_option("-m,--model", parse.models, "Model file; repeat to ensemble")->required();
  p->add_option("--lemmas", parse.lemmas, "Lemma table used in training");
  p->add_option("-j,--jobs", parse.jobs, "Worker threads");

  SmatchFlags smatch;
  CLI::App *s = app.add_subcommand("smatch", "Corpus-level Smatch: P R F1");
  s->add_option("--gold", smatch.gold, "Gold AMR file")->required();
  s->add_option("--pred", smatch.pred, "Predicted AMR file")->required();
  s->add_option("--restarts", smatch.restarts, "Random restarts");
  s->add_option("--seed", smatch.seed, "Random seed");
  s->add_flag("--exhaustive", smatch.exhaustive, "Exact search (small graphs only)");

  StatsFlags stats;
  CLI::App *st = app.add_subcommand("stats", "Sentence length vs. oracle action count");
  st->add_option("input", stats.input, "Trace file or tuned corpus");
  st->add_option("-o,--output", stats.output, "Output file");
  st->add_flag("--histogram", stats.histogram, "Bucket by sentence length");
  st->add_option("--bucket", stats.bucket, "Bucket width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error[" << ErrorCodeName(ErrorCode::kUsage) << "]: " << e.what() << '\n';
    return 2;
  }
  SetWarningsEnabled(!quiet);

  try {
    if (*a) RunAlign(align);
    if (*t) RunTune(tune);
    if (*o) RunOracleCommand(oracle);
    if (*tr) RunTrain(train);
    if (*p) RunParse(parse);
    if (*s) RunSmatch(smatch);
    if (*st) RunStats(stats);
  } catch (const Error &e) {
    std::cerr << "error[" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "error[E_INTERNAL]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace amrkit

int main(int argc, char **argv) { return amrkit::Main(argc, argv); }
