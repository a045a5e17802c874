#include "amrkit/parser.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "amrkit/error.h"
#include "amrkit/logging.h"
#include "amrkit/text.h"

namespace amrkit {

namespace {

constexpr const char *kModelMagic = "amr-parser-model";
constexpr int kModelVersion = 1;

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t HashString(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ Mix(seed);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return Mix(h);
}

std::string Lemma(const std::string &word, const ParseInputs &inputs) {
  return inputs.lemmas ? inputs.lemmas->Primary(word) : Lowercase(word);
}

std::string Describe(const ParserState &s, const StackItem *item) {
  if (!item) return "-";
  if (item->is_word()) return "w:" + Lowercase(Join(item->words, "_"));
  const Concept &c = s.derived.concept_at(item->node);
  return "c:" + (c.is_literal() ? PenmanLiteral(c) : c.label);
}

std::string Bucket(std::size_t n, std::size_t cap) { return std::to_string(std::min(n, cap)); }

}  // namespace

std::vector<std::string> FeatureEncoder::FeatureNames(const ParserState &s,
                                                      const ParseInputs &inputs) const {
  const StackItem *b0 = s.b0();
  const StackItem *b1 = s.b1();
  const StackItem *s0 = s.s0();
  const StackItem *s1 = s.sigma.size() >= 2 ? &s.sigma[s.sigma.size() - 2] : nullptr;
  const StackItem *d0 = s.delta.empty() ? nullptr : &s.delta.front();
  std::string b0d = Describe(s, b0), b1d = Describe(s, b1);
  std::string s0d = Describe(s, s0), s1d = Describe(s, s1), d0d = Describe(s, d0);
  std::string h[3];
  std::string h1tag = "-";
  for (std::size_t i = 0; i < 3; ++i) {
    h[i] = i < s.history.size() ? FormatAction(s.history[s.history.size() - 1 - i]) : "-";
  }
  if (!s.history.empty()) h1tag = ActionTagName(s.history.back().tag);

  std::vector<std::string> f = {
      "bias",
      "b0=" + b0d,
      "b1=" + b1d,
      "s0=" + s0d,
      "s1=" + s1d,
      "d0=" + d0d,
      "h1=" + h[0],
      "h2=" + h[1],
      "h3=" + h[2],
      "h1t=" + h1tag,
      "nsig=" + Bucket(s.sigma.size(), 5),
      "ndel=" + Bucket(s.delta.size(), 5),
      "s0b0=" + s0d + "|" + b0d,
      "s0b0h=" + s0d + "|" + b0d + "|" + h1tag,
      "b0b1=" + b0d + "|" + b1d,
      "b0h=" + b0d + "|" + h1tag,
      "s0s1b0=" + s0d + "|" + s1d + "|" + b0d,
      "d0b0=" + d0d + "|" + b0d,
  };
  if (b0 && b0->is_word()) {
    f.push_back("b0l=" + Lemma(b0->words.front(), inputs));
    f.push_back("b0len=" + Bucket(b0->words.size(), 4));
    if (!inputs.pos.empty() && b0->span) {
      f.push_back("b0pos=" + inputs.pos[static_cast<std::size_t>(b0->span->start)]);
    }
  }
  if (b1 && b1->is_word() && !inputs.pos.empty() && b1->span) {
    f.push_back("b1pos=" + inputs.pos[static_cast<std::size_t>(b1->span->start)]);
  }
  if (b0 && b0->is_concept()) {
    f.push_back("b0in=" + Bucket(s.derived.incoming(b0->node).size(), 3));
    f.push_back("b0out=" + Bucket(s.derived.outgoing(b0->node).size(), 3));
  }
  if (s0) {
    f.push_back("s0in=" + Bucket(s.derived.incoming(s0->node).size(), 3));
    f.push_back("s0out=" + Bucket(s.derived.outgoing(s0->node).size(), 3));
  }
  if (s0 && b0 && b0->is_concept()) {
    bool linked = false;
    for (std::size_t r : s.derived.outgoing(s0->node)) {
      linked |= s.derived.relations()[r].target == b0->node;
    }
    for (std::size_t r : s.derived.incoming(s0->node)) {
      linked |= s.derived.relations()[r].source == b0->node;
    }
    f.push_back(std::string("s0b0arc=") + (linked ? "1" : "0") + "|" + h1tag);
  }
  return f;
}

StateEncoding FeatureEncoder::Encode(const ParserState &s, const ParseInputs &inputs) const {
  StateEncoding e;
  for (const std::string &name : FeatureNames(s, inputs)) e.push_back(HashString(name, seed_));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

std::string LemmaConceptLabel(const std::vector<std::string> &words, const ParseInputs &inputs,
                              const std::set<std::string> &predicate_bases) {
  std::vector<std::string> lemmas;
  for (const std::string &w : words) lemmas.push_back(Lemma(w, inputs));
  std::string base = StripSense(Join(lemmas, "-"));
  if (base.empty()) base = "thing";
  if (predicate_bases.count(base)) return base + "-01";
  return base;
}

std::vector<Candidate> LegalCandidates(const ParserState &s, const std::vector<Action> &vocab,
                                       const ParseInputs &inputs,
                                       const std::set<std::string> &predicate_bases) {
  std::set<ActionTag> tags = LegalActions(s);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!tags.count(vocab[i].tag)) continue;
    Action a = vocab[i];
    if (a.tag == ActionTag::kConfirm && a.label == kLemmaLabel) {
      a.label = LemmaConceptLabel(s.b0()->words, inputs, predicate_bases);
    }
    if (!IsLegal(s, a)) continue;
    out.push_back({i, std::move(a)});
  }
  return out;
}

ActionScorer::ActionScorer(std::vector<Action> vocab, std::set<std::string> predicate_bases,
                           std::uint64_t seed, int hash_bits)
    : vocab_(std::move(vocab)),
      predicate_bases_(std::move(predicate_bases)),
      encoder_(seed),
      hash_bits_(hash_bits) {
  if (hash_bits < 4 || hash_bits > 28) {
    throw Error(ErrorCode::kModel, "hash bits must lie in [4, 28]");
  }
  if (vocab_.empty()) throw Error(ErrorCode::kModel, "empty action vocabulary");
  bias_.assign(vocab_.size(), 0.0);
  weights_.assign(std::size_t{1} << hash_bits, 0.0);
}

std::size_t ActionScorer::Slot(std::uint64_t feature, std::size_t entry) const {
  std::uint64_t h = Mix(feature ^ Mix(static_cast<std::uint64_t>(entry) + 1));
  return static_cast<std::size_t>(h & ((std::uint64_t{1} << hash_bits_) - 1));
}

double ActionScorer::Logit(const StateEncoding &e, std::size_t entry) const {
  double z = bias_[entry];
  for (std::uint64_t f : e) z += weights_[Slot(f, entry)];
  return z;
}

std::vector<double> ActionScorer::Distribution(const StateEncoding &e,
                                               const std::vector<Candidate> &candidates) const {
  if (candidates.empty()) throw Error(ErrorCode::kDecode, "no legal action to score");
  std::vector<double> p(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) p[i] = Logit(e, candidates[i].entry);
  double top = *std::max_element(p.begin(), p.end());
  double sum = 0;
  for (double &x : p) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double &x : p) x /= sum;
  return p;
}

void ActionScorer::Update(const StateEncoding &e, std::size_t entry, double scale) {
  bias_[entry] += scale;
  for (std::uint64_t f : e) weights_[Slot(f, entry)] += scale;
}

void ActionScorer::Save(std::ostream &out) const {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "seed " << seed() << '\n';
  out << "hash-bits " << hash_bits_ << '\n';
  out << "predicates " << predicate_bases_.size() << '\n';
  for (const std::string &p : predicate_bases_) out << p << '\n';
  out << "actions " << vocab_.size() << '\n';
  for (const Action &a : vocab_) out << FormatAction(a) << '\n';
  out << std::setprecision(17) << "bias";
  for (double b : bias_) out << ' ' << b;
  out << '\n';
  std::size_t nonzero = static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](double w) { return w != 0.0; }));
  out << "weights " << nonzero << '\n';
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) out << i << ' ' << weights_[i] << '\n';
  }
}

void ActionScorer::SaveFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model file " + path);
  Save(out);
  if (!out) throw Error(ErrorCode::kIo, "failed writing model file " + path);
}

namespace {

std::string ReadLine(std::istream &in, const char *what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kModel, std::string("model file ends before ") + what);
  }
  return line;
}

template <typename T>
T ReadKeyed(std::istream &in, const std::string &key) {
  std::istringstream line(ReadLine(in, key.c_str()));
  std::string name;
  T value{};
  if (!(line >> name >> value) || name != key) {
    throw Error(ErrorCode::kModel, "expected '" + key + "' in model file");
  }
  return value;
}

}  // namespace

ActionScorer ActionScorer::Load(std::istream &in) {
  std::istringstream header(ReadLine(in, "the header"));
  std::string magic;
  int version = 0;
  if (!(header >> magic >> version) || magic != kModelMagic) {
    throw Error(ErrorCode::kModel, "not an amr parser model");
  }
  if (version != kModelVersion) {
    throw Error(ErrorCode::kModel, "model version " + std::to_string(version) +
                                       " is not supported (expected " +
                                       std::to_string(kModelVersion) + ")");
  }
  auto seed = ReadKeyed<std::uint64_t>(in, "seed");
  auto bits = ReadKeyed<int>(in, "hash-bits");
  auto npred = ReadKeyed<std::size_t>(in, "predicates");
  std::set<std::string> predicates;
  for (std::size_t i = 0; i < npred; ++i) predicates.insert(ReadLine(in, "predicate list"));
  auto nact = ReadKeyed<std::size_t>(in, "actions");
  std::vector<Action> vocab;
  for (std::size_t i = 0; i < nact; ++i) {
    try {
      vocab.push_back(ParseAction(ReadLine(in, "action list")));
    } catch (const Error &e) {
      throw Error(ErrorCode::kModel, std::string("bad action in model file: ") + e.what());
    }
  }
  ActionScorer m(std::move(vocab), std::move(predicates), seed, bits);
  std::istringstream bias(ReadLine(in, "bias"));
  std::string key;
  bias >> key;
  if (key != "bias") throw Error(ErrorCode::kModel, "expected 'bias' in model file");
  for (double &b : m.bias_) {
    if (!(bias >> b)) throw Error(ErrorCode::kModel, "too few bias values");
  }
  auto nweights = ReadKeyed<std::size_t>(in, "weights");
  for (std::size_t i = 0; i < nweights; ++i) {
    std::istringstream line(ReadLine(in, "weights"));
    std::size_t slot = 0;
    double w = 0;
    if (!(line >> slot >> w) || slot >= m.weights_.size()) {
      throw Error(ErrorCode::kModel, "bad weight line " + std::to_string(i + 1));
    }
    m.weights_[slot] = w;
  }
  return m;
}

ActionScorer ActionScorer::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path);
  return Load(in);
}

bool ActionScorer::operator==(const ActionScorer &other) const {
  return vocab_ == other.vocab_ && predicate_bases_ == other.predicate_bases_ &&
         seed() == other.seed() && hash_bits_ == other.hash_bits_ && bias_ == other.bias_ &&
         weights_ == other.weights_;
}

namespace {

// Vocabulary entry that a gold action trains.
std::size_t TargetEntry(const ParserState &s, const Action &gold, const std::vector<Action> &vocab,
                        const ParseInputs &inputs, const std::set<std::string> &predicates) {
  if (gold.tag == ActionTag::kConfirm &&
      LemmaConceptLabel(s.b0()->words, inputs, predicates) == gold.label) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), Action{ActionTag::kConfirm, kLemmaLabel});
    return static_cast<std::size_t>(it - vocab.begin());
  }
  auto it = std::lower_bound(vocab.begin(), vocab.end(), gold);
  if (it == vocab.end() || *it != gold) {
    throw Error(ErrorCode::kTraining, "gold action " + FormatAction(gold) + " is not in the vocabulary");
  }
  return static_cast<std::size_t>(it - vocab.begin());
}

struct Sample {
  StateEncoding encoding;
  std::vector<Candidate> candidates;
  std::size_t gold = 0;  // index into candidates
};

std::vector<Sample> Samples(const TrainingExample &ex, const ActionScorer &m,
                            const LemmaTable *lemmas) {
  ParseInputs inputs{ex.pos, lemmas};
  std::vector<Sample> out;
  ParserState s = InitialState(ex.tokens);
  for (const Action &gold : ex.actions) {
    Sample sample;
    sample.encoding = m.encoder().Encode(s, inputs);
    sample.candidates = LegalCandidates(s, m.vocab(), inputs, m.predicate_bases());
    std::size_t entry = TargetEntry(s, gold, m.vocab(), inputs, m.predicate_bases());
    auto it = std::find_if(sample.candidates.begin(), sample.candidates.end(),
                           [&](const Candidate &c) { return c.entry == entry; });
    if (it == sample.candidates.end()) {
      throw Error(ErrorCode::kTraining, ex.id + ": gold action " + FormatAction(gold) +
                                            " is illegal at step " +
                                            std::to_string(s.history.size() + 1));
    }
    sample.gold = static_cast<std::size_t>(it - sample.candidates.begin());
    out.push_back(std::move(sample));
    ApplyInPlace(s, gold);
  }
  if (!IsTerminal(s)) {
    throw Error(ErrorCode::kTraining, ex.id + ": gold trace does not reach a terminal state");
  }
  return out;
}

std::size_t Argmax(const std::vector<double> &p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

TrainResult Train(const std::vector<TrainingExample> &corpus, const TrainOptions &options) {
  if (corpus.empty()) throw Error(ErrorCode::kTraining, "empty training corpus");
  if (options.epochs < 1) throw Error(ErrorCode::kTraining, "epochs must be positive");
  if (options.holdout_fraction < 0 || options.holdout_fraction >= 1) {
    throw Error(ErrorCode::kTraining, "holdout fraction must lie in [0, 1)");
  }
  std::size_t heldout = static_cast<std::size_t>(
      std::floor(options.holdout_fraction * static_cast<double>(corpus.size())));
  std::size_t ntrain = corpus.size() - heldout;
  if (ntrain == 0) throw Error(ErrorCode::kTraining, "holdout leaves no training sentences");

  // Closed vocabulary over the training traces, plus the lemma fallback and
  // every label-free action.
  std::set<std::string> predicates;
  for (std::size_t i = 0; i < ntrain; ++i) {
    for (const Action &a : corpus[i].actions) {
      if ((a.tag == ActionTag::kConfirm || a.tag == ActionTag::kNew) && HasSenseSuffix(a.label)) {
        predicates.insert(StripSense(a.label));
      }
    }
  }
  std::set<Action> vocab{{ActionTag::kConfirm, kLemmaLabel}};
  for (ActionTag t : {ActionTag::kDrop, ActionTag::kMerge, ActionTag::kCache, ActionTag::kShift,
                      ActionTag::kReduce}) {
    vocab.insert({t, ""});
  }
  for (std::size_t i = 0; i < ntrain; ++i) {
    for (const Action &a : corpus[i].actions) vocab.insert(a);
  }

  TrainResult result{ActionScorer({vocab.begin(), vocab.end()}, predicates, options.seed,
                                  options.hash_bits),
                     {}};
  ActionScorer &m = result.model;

  std::vector<Sample> train, test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<Sample> s = Samples(corpus[i], m, options.lemmas);
    auto &dest = i < ntrain ? train : test;
    std::move(s.begin(), s.end(), std::back_inserter(dest));
  }
  if (train.empty()) throw Error(ErrorCode::kTraining, "training traces are empty");

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss = 0;
    std::size_t correct = 0;
    for (std::size_t idx : order) {
      const Sample &s = train[idx];
      std::vector<double> p = m.Distribution(s.encoding, s.candidates);
      loss -= std::log(std::max(p[s.gold], 1e-300));
      if (Argmax(p) == s.gold) ++correct;
      for (std::size_t c = 0; c < s.candidates.size(); ++c) {
        double grad = p[c] - (c == s.gold ? 1.0 : 0.0);
        if (grad != 0.0) m.Update(s.encoding, s.candidates[c].entry, -options.learning_rate * grad);
      }
    }
    EpochReport report;
    report.epoch = epoch;
    report.loss = loss / static_cast<double>(train.size());
    report.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    if (!test.empty()) {
      std::size_t ok = 0;
      for (const Sample &s : test) ok += Argmax(m.Distribution(s.encoding, s.candidates)) == s.gold;
      report.heldout_accuracy = static_cast<double>(ok) / static_cast<double>(test.size());
    }
    result.epochs.push_back(report);
  }
  return result;
}

double ActionAccuracy(const ActionScorer &m, const std::vector<TrainingExample> &corpus,
                      const LemmaTable *lemmas) {
  std::size_t total = 0, ok = 0;
  for (const TrainingExample &ex : corpus) {
    for (const Sample &s : Samples(ex, m, lemmas)) {
      ++total;
      ok += Argmax(m.Distribution(s.encoding, s.candidates)) == s.gold;
    }
  }
  if (total == 0) throw Error(ErrorCode::kTraining, "no gold actions to score");
  return static_cast<double>(ok) / static_cast<double>(total);
}

Ensemble::Ensemble(std::vector<std::shared_ptr<const ActionScorer>> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::kModel, "an ensemble needs at least one model");
  for (const auto &m : members_) {
    if (m->vocab() != members_.front()->vocab() ||
        m->predicate_bases() != members_.front()->predicate_bases()) {
      throw Error(ErrorCode::kModel, "ensemble members must share one action vocabulary");
    }
  }
}

std::vector<double> Ensemble::Distribution(const ParserState &s, const ParseInputs &inputs,
                                           const std::vector<Candidate> &candidates) const {
  std::vector<double> avg(candidates.size(), 0.0);
  for (const auto &m : members_) {
    std::vector<double> p = m->Distribution(m->encoder().Encode(s, inputs), candidates);
    for (std::size_t i = 0; i < p.size(); ++i) avg[i] += p[i];
  }
  for (double &x : avg) x /= static_cast<double>(members_.size());
  return avg;
}

namespace {

// Consumes what is left without consulting the model.
void Drain(ParserState &s, const ParseInputs &inputs, const std::set<std::string> &predicates) {
  while (!IsTerminal(s)) {
    const StackItem *b0 = s.b0();
    std::set<ActionTag> legal = LegalActions(s);
    Action a{ActionTag::kReduce, ""};
    if (b0 && b0->is_word()) {
      a = legal.count(ActionTag::kDrop)
              ? Action{ActionTag::kDrop, ""}
              : Action{ActionTag::kConfirm, LemmaConceptLabel(b0->words, inputs, predicates)};
    } else if (b0) {
      a = {ActionTag::kShift, ""};
    }
    ApplyInPlace(s, a);
  }
}

}  // namespace

ParseResult Parse(const Ensemble &model, const std::vector<std::string> &tokens,
                  const ParseInputs &inputs, const ParseOptions &options) {
  if (!inputs.pos.empty() && inputs.pos.size() != tokens.size()) {
    throw Error(ErrorCode::kInput, "token and POS counts differ");
  }
  const ActionScorer &head = model.front();
  ParseResult result;
  ParserState s = InitialState(tokens);
  const std::size_t guard = options.guard_factor * tokens.size();
  while (!IsTerminal(s)) {
    if (s.history.size() >= guard) {
      result.guard_triggered = true;
      Warn("decoding exceeded " + std::to_string(guard) + " steps; draining the state");
      Drain(s, inputs, head.predicate_bases());
      break;
    }
    std::vector<Candidate> candidates =
        LegalCandidates(s, head.vocab(), inputs, head.predicate_bases());
    std::vector<double> p = model.Distribution(s, inputs, candidates);
    std::size_t best = Argmax(p);
    Action chosen = candidates[best].action;
    if (options.record_steps) result.steps.push_back({std::move(candidates), p, best});
    ApplyInPlace(s, chosen);
  }
  result.actions = s.history;
  result.graph = ExtractGraph(s);
  return result;
}

ParseResult Parse(const ActionScorer &model, const std::vector<std::string> &tokens,
                  const ParseInputs &inputs, const ParseOptions &options) {
  std::shared_ptr<const ActionScorer> alias(&model, [](const ActionScorer *) {});
  return Parse(Ensemble({alias}), tokens, inputs, options);
}

}  // namespace amrkit
