#ifndef AMRKIT_ALIGNER_H_
#define AMRKIT_ALIGNER_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amrkit/graph.h"
#include "amrkit/resources.h"
#include "amrkit/span.h"

namespace amrkit {


// One entry of A_c: a span plus, for updating-rule records, the head of
// the fragment whose alignment produced it.
struct AlignmentRecord {
  Span span;
  std::optional<NodeId> trigger;

  auto operator<=>(const AlignmentRecord &) const = default;
};

// Fragment head -> chosen record. Fragments without an entry are unaligned.
struct CandidateAlignment {
  std::map<NodeId, AlignmentRecord> records;
  std::uint64_t graph_key = 0;  // GraphFingerprint of the aligned graph

  std::optional<Span> SpanOf(NodeId head) const;
  // Span per graph node, expanding fragments to their members.
  std::vector<std::optional<Span>> NodeSpans(const AmrGraph &g) const;
  bool SameSpans(const CandidateAlignment &other) const;
};

struct AlignResources {
  const LemmaTable *lemmas = nullptr;
  const EmbeddingTable *embeddings = nullptr;
  const MorphLinkTable *morph = nullptr;
  double cosine_threshold = kDefaultCosineThreshold;
};

struct AlignContext {
  const AmrGraph &graph;
  const std::vector<Fragment> &fragments;
  const std::vector<std::string> &tokens;
  const AlignResources &resources;
};

enum class RuleKind { kMatching, kUpdating };

// Matching rules compare a fragment with a span directly. Updating rules
// decide whether `fragment` should share the span of an aligned `trigger`
// fragment.
struct Rule {
  std::string name;
  RuleKind kind;
  std::function<bool(const AlignContext &, const Fragment &, const Span &)> match;
  std::function<bool(const AlignContext &, const Fragment &fragment,
                     const Fragment &trigger, const Span &)>
      update;
};

// Exact concept, named entity, date entity, fuzzy prefix-4, then the
// updating rules Entity Type, Minus Polarity and Quantity.
std::vector<Rule> BaseRuleSet();
// Semantic/morphological named entity and concept matching.
std::vector<Rule> ExtendedRuleSet();
// Base matching rules, extended rules, then base updating rules.
std::vector<Rule> CombinedRuleSet(bool extended);

struct AlignerOptions {
  std::size_t limit = 50;             // 0 = unlimited
  std::size_t per_fragment_cap = 5;   // top-k kept when the product is too big
  double product_cap = 1e6;
};

struct AlignmentSet {
  std::vector<CandidateAlignment> candidates;
  std::vector<NodeId> heads;                                  // fragment heads
  std::vector<std::vector<AlignmentRecord>> records;          // A_c per fragment
  bool pruned = false;
};

AlignmentSet EnumerateAlignments(const AmrGraph &g, const std::vector<std::string> &tokens,
                                 const std::vector<Rule> &rules,
                                 const AlignResources &resources,
                                 const AlignerOptions &options = {});

// The product-and-filter stage on its own. `records[f]` is A_c for the
// fragment headed by `heads[f]`; triggers name fragment heads.
std::vector<CandidateAlignment> EnumerateCandidates(
    const std::vector<NodeId> &heads,
    const std::vector<std::vector<AlignmentRecord>> &records, std::size_t limit);

struct AlignmentScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// (fragment head, span) pairs of `pred` scored against `gold`.
AlignmentScore AlignmentF1(const CandidateAlignment &pred, const CandidateAlignment &gold);

// `s-e|addr+addr ...`, one item per distinct span, heads as node addresses.
std::string FormatAlignment(const AmrGraph &g, const CandidateAlignment &a);
// Accepts member addresses as well as heads.
CandidateAlignment ParseAlignment(const AmrGraph &g, const std::string &text);

}  // namespace amrkit

#endif  // AMRKIT_ALIGNER_H_
