#ifndef AMRKIT_GRAPH_H_
#define AMRKIT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amrkit {

using NodeId = std::size_t;

enum class ConceptKind {
  kPredicate,       // sense-tagged frame, e.g. freeze-01
  kEntityType,      // concept with a :name child, or date-entity
  kName,            // the `name` node of a named entity
  kConcept,         // any other variable concept
  kConstant,        // unquoted literal: numbers, `-`, `imperative`
  kAttributeValue,  // quoted string literal
};

enum class LiteralKind { kNone, kSymbol, kString };

struct Concept {
  std::string var;  // Penman variable as authored; empty for literals
  std::string label;
  LiteralKind literal = LiteralKind::kNone;

  bool is_literal() const { return literal != LiteralKind::kNone; }
};

struct Relation {
  NodeId source;
  NodeId target;
  std::string role;  // with leading colon, as authored (":ARG1-of" kept)
};

// Rooted, directed, labeled concept graph. Edges keep the direction in
// which they were authored; inverse roles are normalized only when
// triples are extracted for scoring.
class AmrGraph {
 public:
  AmrGraph() = default;

  NodeId AddConcept(std::string var, std::string label);
  NodeId AddLiteral(std::string value, LiteralKind kind);
  // Throws a structure error on self-loops and duplicate triples.
  std::size_t AddRelation(NodeId source, NodeId target, std::string role);
  void SetRoot(NodeId id);

  bool empty() const { return concepts_.empty(); }
  std::size_t size() const { return concepts_.size(); }
  bool has_root() const { return root_.has_value(); }
  NodeId root() const;

  const std::vector<Concept> &concepts() const { return concepts_; }
  const Concept &concept_at(NodeId id) const;
  const std::vector<Relation> &relations() const { return relations_; }
  const std::vector<std::size_t> &outgoing(NodeId id) const {
    return out_[id];
  }
  const std::vector<std::size_t> &incoming(NodeId id) const {
    return in_[id];
  }

  ConceptKind kind(NodeId id) const;
  bool HasRelation(NodeId source, NodeId target, const std::string &role) const;
  std::optional<NodeId> FindVariable(const std::string &var) const;
  // First child reached through `role`, if any.
  std::optional<NodeId> Child(NodeId id, const std::string &role) const;
  // Sources of edges entering `id` (authored direction).
  std::vector<NodeId> Parents(NodeId id) const;

  // Copy of the graph restricted to `keep`; `old_to_new` receives the
  // index map (npos for dropped nodes).
  AmrGraph Subgraph(const std::vector<bool> &keep,
                    std::vector<NodeId> *old_to_new = nullptr) const;

 private:
  std::vector<Concept> concepts_;
  std::vector<Relation> relations_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::optional<NodeId> root_;
};

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

// `:ARG0-of` <-> `:ARG0`. Roles such as `:consist-of` are not inverses.
bool IsInverseRole(const std::string &role);
std::string InvertRole(const std::string &role);

// Literal text as it appears in Penman ("North" keeps its quotes).
std::string PenmanLiteral(const Concept &c);
// Classifies an unquoted Penman atom that is not a variable.
LiteralKind ClassifyAtom(const std::string &atom);

// An alignable unit: a named entity (`name` plus its :opN strings), a
// date-entity plus its attributes, or a single concept.
struct Fragment {
  NodeId head;
  std::vector<NodeId> members;                // head first
  std::vector<std::size_t> internal_relations;
};

std::vector<Fragment> ExtractFragments(const AmrGraph &g);
// fragment index per node
std::vector<std::size_t> FragmentIndex(const AmrGraph &g,
                                       const std::vector<Fragment> &fragments);

// Longest acyclic directed path from the root, per node. Cyclic graphs fall
// back to shortest paths; nodes unreachable along edge direction get their
// undirected BFS distance.
std::vector<int> DepthsFromRoot(const AmrGraph &g);
int DepthToRoot(const AmrGraph &g, NodeId id);

// True when every node is reachable from the root with edges taken as
// undirected.
bool IsConnected(const AmrGraph &g);

// Stable hash over labels and edges; used to check that two alignments
// refer to the same graph.
std::uint64_t GraphFingerprint(const AmrGraph &g);

}  // namespace amrkit

#endif  // AMRKIT_GRAPH_H_
