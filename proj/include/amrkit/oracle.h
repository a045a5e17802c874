#ifndef AMRKIT_ORACLE_H_
#define AMRKIT_ORACLE_H_

#include <optional>
#include <string>
#include <vector>

#include "amrkit/aligner.h"
#include "amrkit/graph.h"
#include "amrkit/smatch.h"
#include "amrkit/transition.h"

namespace amrkit {

// The gold graph with unaligned fragments removed.
struct PrunedGraph {
  AmrGraph graph;
  std::vector<NodeId> to_pruned;    // original id -> pruned id or kNoNode
  std::vector<NodeId> to_original;  // pruned id -> original id
  std::vector<Span> spans;          // aligned span per pruned node
};

// Drops unaligned fragments and their edges. An unaligned concept with
// exactly one kept parent and one kept child is contracted into a single
// edge carrying the upper role; an unaligned root with exactly one kept
// child hands the root over to it. Pieces cut off from the root are
// dropped. Throws a prune error when nothing usable is left.
PrunedGraph PruneUnaligned(const AmrGraph &g, const CandidateAlignment &a);

// Which gold edges the derivation has already built.
class EdgeLedger {
 public:
  EdgeLedger() = default;
  explicit EdgeLedger(const AmrGraph &g);

  bool processed(std::size_t relation) const { return processed_[relation]; }
  // Throws an oracle error when the edge was already processed.
  void Mark(std::size_t relation);
  std::size_t unprocessed(NodeId node) const { return open_[node]; }
  std::size_t marked() const { return marked_; }

 private:
  std::vector<std::pair<NodeId, NodeId>> ends_;
  std::vector<bool> processed_;
  std::vector<std::size_t> open_;
  std::size_t marked_ = 0;
};

// Deterministic oracle over one (sentence, gold graph, alignment) triple.
class Oracle {
 public:
  // Throws a prune error when the alignment leaves nothing to build.
  Oracle(const std::vector<std::string> &tokens, const AmrGraph &gold,
         const CandidateAlignment &alignment);

  // First matching condition for `s`. Does not change the oracle.
  Action NextAction(const ParserState &s) const;
  // NextAction, applied to `s`, with the ledger and concept map updated.
  Action Step(ParserState &s);

  const PrunedGraph &pruned() const { return pruned_; }
  const EdgeLedger &ledger() const { return ledger_; }
  // Gold (pruned) concept behind a derived node, if any.
  std::optional<NodeId> GoldOf(NodeId derived) const;

 private:
  struct Decision {
    Action action;
    std::optional<NodeId> gold;      // concept produced by Confirm/Entity/New
    std::optional<std::size_t> edge;  // gold edge built by Left/Right
  };

  Decision Decide(const ParserState &s) const;
  Decision DecideWord(const ParserState &s) const;
  Decision DecideConcept(const ParserState &s) const;
  bool Pending(const ParserState &s, NodeId gold) const;
  std::string LabelOf(NodeId gold) const;
  bool Derived(NodeId gold) const { return derived_of_[gold] != kNoNode; }
  void Bind(NodeId gold, NodeId derived);

  std::vector<std::string> tokens_;
  PrunedGraph pruned_;
  std::vector<int> depth_;
  std::vector<bool> entity_internal_;  // built as part of an entity group
  std::vector<Span> aligned_spans_;
  EdgeLedger ledger_;
  std::vector<NodeId> derived_of_;
  std::vector<NodeId> gold_of_;
};

struct OracleRun {
  std::vector<Action> actions;
  AmrGraph parsed;
  SmatchResult score;  // parsed vs. the unpruned gold graph
  std::size_t action_count = 0;
  std::size_t sentence_length = 0;
  bool usable = true;  // false when pruning failed
  std::string note;    // why the candidate is unusable

  double smatch_f1() const { return score.f1; }
};

OracleRun RunOracle(const std::vector<std::string> &tokens, const AmrGraph &gold,
                    const CandidateAlignment &alignment,
                    const SmatchOptions &smatch = {});

std::size_t CountActions(const std::vector<Action> &actions, ActionTag tag);

struct TuneResult {
  std::size_t best = 0;  // index into the candidate list
  CandidateAlignment alignment;
  OracleRun run;
  std::vector<OracleRun> runs;  // one per candidate, in order
};

// Highest oracle F1, then fewest actions, then earliest candidate.
// `jobs` > 1 evaluates candidates concurrently; the result does not depend
// on it.
TuneResult Tune(const std::vector<std::string> &tokens, const AmrGraph &gold,
                const std::vector<CandidateAlignment> &candidates,
                const SmatchOptions &smatch = {}, unsigned jobs = 1);

struct HistogramBucket {
  std::size_t min_length = 0;  // inclusive
  std::size_t max_length = 0;  // inclusive
  std::size_t runs = 0;
  double mean_actions = 0;
};

struct ActionStats {
  double mean = 0;
  std::vector<HistogramBucket> histogram;
};

// Throws a stats error for an empty list.
ActionStats ComputeActionStats(const std::vector<OracleRun> &runs,
                               std::size_t bucket_width = 10);

}  // namespace amrkit

#endif  // AMRKIT_ORACLE_H_
