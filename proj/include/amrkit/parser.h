#ifndef AMRKIT_PARSER_H_
#define AMRKIT_PARSER_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "amrkit/graph.h"
#include "amrkit/resources.h"
#include "amrkit/transition.h"

namespace amrkit {

// Side inputs available to the encoder and the label fallback.
struct ParseInputs {
  std::vector<std::string> pos;      // empty, or one tag per token
  const LemmaTable *lemmas = nullptr;
};

// Sorted, deduplicated 64-bit feature hashes.
using StateEncoding = std::vector<std::uint64_t>;

class StateEncoder {
 public:
  virtual ~StateEncoder() = default;
  virtual StateEncoding Encode(const ParserState &s, const ParseInputs &inputs) const = 0;
};

// Hashed indicator features over sigma top-2, delta head, buffer front-2,
// the last three actions and arc counts.
class FeatureEncoder : public StateEncoder {
 public:
  explicit FeatureEncoder(std::uint64_t seed = 1) : seed_(seed) {}
  StateEncoding Encode(const ParserState &s, const ParseInputs &inputs) const override;
  // Readable names of the features, before hashing. Used by tests.
  std::vector<std::string> FeatureNames(const ParserState &s, const ParseInputs &inputs) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Confirm label that stands for "the lemma of b0".
inline constexpr const char *kLemmaLabel = "<lemma>";

// Sense-stripped lemma of the words, plus `-01` when the lemma is a known
// predicate base.
std::string LemmaConceptLabel(const std::vector<std::string> &words, const ParseInputs &inputs,
                              const std::set<std::string> &predicate_bases);

struct Candidate {
  std::size_t entry;  // index into the action vocabulary
  Action action;      // with the lemma label resolved
};

// Vocabulary entries applicable to `s`, in vocabulary order.
std::vector<Candidate> LegalCandidates(const ParserState &s, const std::vector<Action> &vocab,
                                       const ParseInputs &inputs,
                                       const std::set<std::string> &predicate_bases);

// Linear softmax scorer: logit(a) = b_a + sum of g_a over active features.
class ActionScorer {
 public:
  ActionScorer(std::vector<Action> vocab, std::set<std::string> predicate_bases,
               std::uint64_t seed = 1, int hash_bits = 20);

  const std::vector<Action> &vocab() const { return vocab_; }
  const std::set<std::string> &predicate_bases() const { return predicate_bases_; }
  std::uint64_t seed() const { return encoder_.seed(); }
  int hash_bits() const { return hash_bits_; }
  const FeatureEncoder &encoder() const { return encoder_; }

  double Logit(const StateEncoding &e, std::size_t entry) const;
  // Softmax over the given candidates only. Throws a decode error when
  // there are none.
  std::vector<double> Distribution(const StateEncoding &e,
                                   const std::vector<Candidate> &candidates) const;

  // Gradient step on `scale * d logit(entry)`.
  void Update(const StateEncoding &e, std::size_t entry, double scale);
  double &bias(std::size_t entry) { return bias_[entry]; }
  double &weight(std::uint64_t feature, std::size_t entry) {
    return weights_[Slot(feature, entry)];
  }

  void Save(std::ostream &out) const;
  void SaveFile(const std::string &path) const;
  // Throws a model error on a bad header or version.
  static ActionScorer Load(std::istream &in);
  static ActionScorer LoadFile(const std::string &path);

  bool operator==(const ActionScorer &other) const;

 private:
  std::size_t Slot(std::uint64_t feature, std::size_t entry) const;

  std::vector<Action> vocab_;
  std::set<std::string> predicate_bases_;
  FeatureEncoder encoder_;
  int hash_bits_;
  std::vector<double> bias_;
  std::vector<double> weights_;
};

struct TrainingExample {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<Action> actions;  // gold trace
};

struct TrainOptions {
  int epochs = 10;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  int hash_bits = 20;
  double holdout_fraction = 0.0;  // tail share of the corpus kept for accuracy
  const LemmaTable *lemmas = nullptr;
};

struct EpochReport {
  int epoch = 0;
  double loss = 0;            // mean negative log-likelihood per training state
  double train_accuracy = 0;  // argmax == gold, measured before each update
  double heldout_accuracy = -1;  // -1 without a held-out split
};

struct TrainResult {
  ActionScorer model;
  std::vector<EpochReport> epochs;
};

// Throws a training error on an empty corpus or an illegal gold action.
TrainResult Train(const std::vector<TrainingExample> &corpus, const TrainOptions &options = {});

// Fraction of gold actions that the model ranks first when following the
// gold trace.
double ActionAccuracy(const ActionScorer &m, const std::vector<TrainingExample> &corpus,
                      const LemmaTable *lemmas = nullptr);

// Averages member distributions. Members must share one vocabulary.
class Ensemble {
 public:
  explicit Ensemble(std::vector<std::shared_ptr<const ActionScorer>> members);

  const ActionScorer &front() const { return *members_.front(); }
  std::size_t size() const { return members_.size(); }
  std::vector<double> Distribution(const ParserState &s, const ParseInputs &inputs,
                                   const std::vector<Candidate> &candidates) const;

 private:
  std::vector<std::shared_ptr<const ActionScorer>> members_;
};

struct DecodeStep {
  std::vector<Candidate> candidates;
  std::vector<double> probabilities;
  std::size_t chosen = 0;
};

struct ParseOptions {
  bool record_steps = false;
  std::size_t guard_factor = 20;  // steps allowed per token before draining
};

struct ParseResult {
  AmrGraph graph;
  std::vector<Action> actions;
  bool guard_triggered = false;
  std::vector<DecodeStep> steps;  // filled when record_steps is set
};

// Greedy decoding. Never fails on a non-empty sentence: a runaway
// derivation is drained with Drop/Shift/Reduce.
ParseResult Parse(const Ensemble &model, const std::vector<std::string> &tokens,
                  const ParseInputs &inputs, const ParseOptions &options = {});
ParseResult Parse(const ActionScorer &model, const std::vector<std::string> &tokens,
                  const ParseInputs &inputs, const ParseOptions &options = {});

}  // namespace amrkit

#endif  // AMRKIT_PARSER_H_
