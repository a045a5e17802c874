#include "amrkit/graph.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "amrkit/error.h"
#include "amrkit/logging.h"
#include "amrkit/text.h"

namespace amrkit {

NodeId AmrGraph::AddConcept(std::string var, std::string label) {
  if (label.empty()) {
    throw Error(ErrorCode::kStructure, "concept '" + var + "' has an empty label");
  }
  concepts_.push_back(Concept{std::move(var), std::move(label), LiteralKind::kNone});
  out_.emplace_back();
  in_.emplace_back();
  return concepts_.size() - 1;
}

NodeId AmrGraph::AddLiteral(std::string value, LiteralKind kind) {
  if (kind == LiteralKind::kNone) kind = LiteralKind::kSymbol;
  if (value.empty() && kind == LiteralKind::kSymbol) {
    throw Error(ErrorCode::kStructure, "empty literal");
  }
  concepts_.push_back(Concept{"", std::move(value), kind});
  out_.emplace_back();
  in_.emplace_back();
  return concepts_.size() - 1;
}

std::size_t AmrGraph::AddRelation(NodeId source, NodeId target, std::string role) {
  if (source >= size() || target >= size()) {
    throw Error(ErrorCode::kLookup, "relation endpoint out of range");
  }
  if (source == target) {
    throw Error(ErrorCode::kStructure,
                "self-loop on '" + concepts_[source].label + "' via " + role);
  }
  if (concepts_[source].is_literal()) {
    throw Error(ErrorCode::kStructure,
                "literal " + PenmanLiteral(concepts_[source]) + " cannot have children");
  }
  if (HasRelation(source, target, role)) {
    throw Error(ErrorCode::kStructure, "duplicate relation " + role + " between '" +
                                           concepts_[source].label + "' and '" +
                                           concepts_[target].label + "'");
  }
  relations_.push_back(Relation{source, target, std::move(role)});
  out_[source].push_back(relations_.size() - 1);
  in_[target].push_back(relations_.size() - 1);
  return relations_.size() - 1;
}

void AmrGraph::SetRoot(NodeId id) {
  if (id >= size()) throw Error(ErrorCode::kLookup, "root out of range");
  root_ = id;
}

NodeId AmrGraph::root() const {
  if (!root_) throw Error(ErrorCode::kState, "graph has no root");
  return *root_;
}

const Concept &AmrGraph::concept_at(NodeId id) const {
  if (id >= size()) {
    throw Error(ErrorCode::kLookup, "node " + std::to_string(id) + " not in graph");
  }
  return concepts_[id];
}

ConceptKind AmrGraph::kind(NodeId id) const {
  const Concept &c = concept_at(id);
  if (c.literal == LiteralKind::kString) return ConceptKind::kAttributeValue;
  if (c.literal == LiteralKind::kSymbol) return ConceptKind::kConstant;
  if (c.label == "name") return ConceptKind::kName;
  if (c.label == "date-entity") return ConceptKind::kEntityType;
  for (std::size_t r : out_[id]) {
    const Relation &rel = relations_[r];
    if (rel.role == ":name" && concepts_[rel.target].label == "name" &&
        !concepts_[rel.target].is_literal()) {
      return ConceptKind::kEntityType;
    }
  }
  if (HasSenseSuffix(c.label)) return ConceptKind::kPredicate;
  return ConceptKind::kConcept;
}

bool AmrGraph::HasRelation(NodeId source, NodeId target, const std::string &role) const {
  for (std::size_t r : out_[source]) {
    if (relations_[r].target == target && relations_[r].role == role) return true;
  }
  return false;
}

std::optional<NodeId> AmrGraph::FindVariable(const std::string &var) const {
  for (NodeId i = 0; i < concepts_.size(); ++i) {
    if (!concepts_[i].is_literal() && concepts_[i].var == var) return i;
  }
  return std::nullopt;
}

std::optional<NodeId> AmrGraph::Child(NodeId id, const std::string &role) const {
  for (std::size_t r : out_[id]) {
    if (relations_[r].role == role) return relations_[r].target;
  }
  return std::nullopt;
}

std::vector<NodeId> AmrGraph::Parents(NodeId id) const {
  std::vector<NodeId> out;
  for (std::size_t r : in_[id]) out.push_back(relations_[r].source);
  return out;
}

AmrGraph AmrGraph::Subgraph(const std::vector<bool> &keep,
                            std::vector<NodeId> *old_to_new) const {
  AmrGraph out;
  std::vector<NodeId> remap(size(), kNoNode);
  for (NodeId i = 0; i < size(); ++i) {
    if (!keep[i]) continue;
    const Concept &c = concepts_[i];
    remap[i] = c.is_literal() ? out.AddLiteral(c.label, c.literal)
                              : out.AddConcept(c.var, c.label);
  }
  for (const Relation &rel : relations_) {
    if (remap[rel.source] != kNoNode && remap[rel.target] != kNoNode) {
      out.AddRelation(remap[rel.source], remap[rel.target], rel.role);
    }
  }
  if (root_ && remap[*root_] != kNoNode) out.SetRoot(remap[*root_]);
  if (old_to_new) *old_to_new = std::move(remap);
  return out;
}

namespace {
bool IsOfBaseRole(const std::string &role) {
  return role == ":consist-of" || role == ":prep-out-of" ||
         role == ":prep-on-behalf-of";
}
}  // namespace

bool IsInverseRole(const std::string &role) {
  return role.size() > 4 && role.compare(role.size() - 3, 3, "-of") == 0 &&
         !IsOfBaseRole(role);
}

std::string InvertRole(const std::string &role) {
  if (IsInverseRole(role)) return role.substr(0, role.size() - 3);
  return role + "-of";
}

std::string PenmanLiteral(const Concept &c) {
  if (c.literal == LiteralKind::kString) {
    std::string out = "\"";
    for (char ch : c.label) {
      if (ch == '"' || ch == '\\') out.push_back('\\');
      out.push_back(ch);
    }
    out.push_back('"');
    return out;
  }
  return c.label;
}

LiteralKind ClassifyAtom(const std::string &atom) {
  if (atom.size() >= 2 && atom.front() == '"' && atom.back() == '"') {
    return LiteralKind::kString;
  }
  return LiteralKind::kSymbol;
}

std::vector<Fragment> ExtractFragments(const AmrGraph &g) {
  std::vector<Fragment> fragments;
  std::vector<bool> assigned(g.size(), false);
  for (NodeId id = 0; id < g.size(); ++id) {
    const Concept &c = g.concept_at(id);
    if (c.is_literal()) continue;
    bool is_name = c.label == "name";
    bool is_date = c.label == "date-entity";
    if (!is_name && !is_date) continue;
    Fragment f{id, {id}, {}};
    assigned[id] = true;
    for (std::size_t r : g.outgoing(id)) {
      const Relation &rel = g.relations()[r];
      if (!g.concept_at(rel.target).is_literal() || assigned[rel.target]) continue;
      if (is_name && rel.role.rfind(":op", 0) != 0) continue;
      f.members.push_back(rel.target);
      f.internal_relations.push_back(r);
      assigned[rel.target] = true;
    }
    fragments.push_back(std::move(f));
  }
  for (NodeId id = 0; id < g.size(); ++id) {
    if (!assigned[id]) fragments.push_back(Fragment{id, {id}, {}});
  }
  std::sort(fragments.begin(), fragments.end(),
            [](const Fragment &a, const Fragment &b) { return a.head < b.head; });
  return fragments;
}

std::vector<std::size_t> FragmentIndex(const AmrGraph &g,
                                       const std::vector<Fragment> &fragments) {
  std::vector<std::size_t> index(g.size(), static_cast<std::size_t>(-1));
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    for (NodeId m : fragments[f].members) index[m] = f;
  }
  return index;
}

namespace {

constexpr int kUnreached = std::numeric_limits<int>::min();

std::vector<int> UndirectedDistances(const AmrGraph &g, NodeId root) {
  std::vector<int> dist(g.size(), kUnreached);
  std::deque<NodeId> queue{root};
  dist[root] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    auto visit = [&](NodeId v) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    };
    for (std::size_t r : g.outgoing(u)) visit(g.relations()[r].target);
    for (std::size_t r : g.incoming(u)) visit(g.relations()[r].source);
  }
  return dist;
}

}  // namespace

std::vector<int> DepthsFromRoot(const AmrGraph &g) {
  std::vector<int> depth(g.size(), kUnreached);
  if (g.empty() || !g.has_root()) return depth;
  const NodeId root = g.root();

  std::vector<bool> reachable(g.size(), false);
  std::vector<NodeId> stack{root};
  reachable[root] = true;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (std::size_t r : g.outgoing(u)) {
      NodeId v = g.relations()[r].target;
      if (!reachable[v]) {
        reachable[v] = true;
        stack.push_back(v);
      }
    }
  }

  // Kahn's algorithm over the reachable part.
  std::vector<int> indegree(g.size(), 0);
  std::size_t reachable_count = 0;
  for (NodeId u = 0; u < g.size(); ++u) {
    if (!reachable[u]) continue;
    ++reachable_count;
    for (std::size_t r : g.outgoing(u)) ++indegree[g.relations()[r].target];
  }
  std::vector<NodeId> order;
  std::deque<NodeId> ready;
  for (NodeId u = 0; u < g.size(); ++u) {
    if (reachable[u] && indegree[u] == 0) ready.push_back(u);
  }
  while (!ready.empty()) {
    NodeId u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (std::size_t r : g.outgoing(u)) {
      NodeId v = g.relations()[r].target;
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }

  if (order.size() == reachable_count) {
    depth[root] = 0;
    for (NodeId u : order) {
      if (depth[u] == kUnreached) continue;
      for (std::size_t r : g.outgoing(u)) {
        NodeId v = g.relations()[r].target;
        depth[v] = std::max(depth[v], depth[u] + 1);
      }
    }
  } else {
    Warn("cyclic graph: root distance falls back to shortest paths");
    std::deque<NodeId> queue{root};
    depth[root] = 0;
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (std::size_t r : g.outgoing(u)) {
        NodeId v = g.relations()[r].target;
        if (depth[v] == kUnreached) {
          depth[v] = depth[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }

  std::vector<int> undirected;
  for (NodeId u = 0; u < g.size(); ++u) {
    if (depth[u] != kUnreached) continue;
    if (undirected.empty()) undirected = UndirectedDistances(g, root);
    depth[u] = undirected[u] == kUnreached ? 0 : undirected[u];
  }
  return depth;
}

int DepthToRoot(const AmrGraph &g, NodeId id) {
  if (id >= g.size()) {
    throw Error(ErrorCode::kLookup, "node " + std::to_string(id) + " not in graph");
  }
  return DepthsFromRoot(g)[id];
}

bool IsConnected(const AmrGraph &g) {
  if (g.empty()) return true;
  if (!g.has_root()) return false;
  std::vector<int> dist = UndirectedDistances(g, g.root());
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d == kUnreached; });
}

std::uint64_t GraphFingerprint(const AmrGraph &g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const Concept &c : g.concepts()) mix(PenmanLiteral(c));
  for (const Relation &r : g.relations()) {
    mix(std::to_string(r.source));
    mix(std::to_string(r.target));
    mix(r.role);
  }
  return h;
}

}  // namespace amrkit
