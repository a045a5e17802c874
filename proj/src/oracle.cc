#include "amrkit/oracle.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "amrkit/error.h"
#include "amrkit/parallel.h"
#include "amrkit/penman.h"

namespace amrkit {

namespace {

std::vector<bool> ReachableUndirected(const AmrGraph &g, NodeId from) {
  std::vector<bool> seen(g.size(), false);
  std::vector<NodeId> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    NodeId n = todo.back();
    todo.pop_back();
    auto visit = [&](NodeId m) {
      if (!seen[m]) {
        seen[m] = true;
        todo.push_back(m);
      }
    };
    for (std::size_t r : g.outgoing(n)) visit(g.relations()[r].target);
    for (std::size_t r : g.incoming(n)) visit(g.relations()[r].source);
  }
  return seen;
}

}  // namespace

PrunedGraph PruneUnaligned(const AmrGraph &g, const CandidateAlignment &a) {
  if (g.empty() || !g.has_root()) throw Error(ErrorCode::kPrune, "gold graph is empty");
  std::vector<std::optional<Span>> spans = a.NodeSpans(g);
  std::vector<bool> keep(g.size());
  for (NodeId i = 0; i < g.size(); ++i) keep[i] = spans[i].has_value();

  struct Contracted {
    NodeId parent, child;
    std::string role;
  };
  std::vector<Contracted> contracted;
  NodeId root = g.root();
  for (NodeId m = 0; m < g.size(); ++m) {
    if (keep[m] || g.concept_at(m).is_literal()) continue;
    std::vector<std::size_t> up, down;
    for (std::size_t r : g.incoming(m)) {
      if (keep[g.relations()[r].source]) up.push_back(r);
    }
    for (std::size_t r : g.outgoing(m)) {
      if (keep[g.relations()[r].target]) down.push_back(r);
    }
    if (m == root) {
      if (up.empty() && down.size() == 1) {
        NodeId child = g.relations()[down.front()].target;
        if (!g.concept_at(child).is_literal()) root = child;
      }
      continue;
    }
    if (up.size() == 1 && down.size() == 1) {
      const Relation &upper = g.relations()[up.front()];
      const Relation &lower = g.relations()[down.front()];
      if (upper.source != lower.target) {
        contracted.push_back({upper.source, lower.target, upper.role});
      }
    }
  }
  if (!keep[root]) {
    throw Error(ErrorCode::kPrune, "root concept '" + g.concept_at(g.root()).label +
                                       "' is unaligned and cannot be contracted");
  }

  std::vector<NodeId> first_map;
  AmrGraph kept = g.Subgraph(keep, &first_map);
  for (const Contracted &c : contracted) {
    NodeId p = first_map[c.parent];
    NodeId ch = first_map[c.child];
    if (!kept.HasRelation(p, ch, c.role)) kept.AddRelation(p, ch, c.role);
  }
  kept.SetRoot(first_map[root]);

  std::vector<bool> connected = ReachableUndirected(kept, kept.root());
  std::vector<NodeId> second_map;
  PrunedGraph out;
  out.graph = kept.Subgraph(connected, &second_map);
  out.to_pruned.assign(g.size(), kNoNode);
  out.to_original.assign(out.graph.size(), kNoNode);
  out.spans.resize(out.graph.size());
  for (NodeId i = 0; i < g.size(); ++i) {
    if (first_map[i] == kNoNode) continue;
    NodeId p = second_map[first_map[i]];
    if (p == kNoNode) continue;
    out.to_pruned[i] = p;
    out.to_original[p] = i;
    out.spans[p] = *spans[i];
  }
  return out;
}

EdgeLedger::EdgeLedger(const AmrGraph &g)
    : processed_(g.relations().size(), false), open_(g.size(), 0) {
  for (const Relation &r : g.relations()) {
    ends_.emplace_back(r.source, r.target);
    ++open_[r.source];
    ++open_[r.target];
  }
}

void EdgeLedger::Mark(std::size_t relation) {
  if (relation >= processed_.size()) {
    throw Error(ErrorCode::kOracle, "no gold edge #" + std::to_string(relation));
  }
  if (processed_[relation]) {
    throw Error(ErrorCode::kOracle, "gold edge #" + std::to_string(relation) +
                                        " processed twice");
  }
  processed_[relation] = true;
  --open_[ends_[relation].first];
  --open_[ends_[relation].second];
  ++marked_;
}

Oracle::Oracle(const std::vector<std::string> &tokens, const AmrGraph &gold,
               const CandidateAlignment &alignment)
    : tokens_(tokens), pruned_(PruneUnaligned(gold, alignment)) {
  const AmrGraph &g = pruned_.graph;
  depth_ = DepthsFromRoot(g);
  entity_internal_.assign(g.size(), false);
  for (const Fragment &f : ExtractFragments(g)) {
    if (f.members.size() < 2 && g.concept_at(f.head).label != "name") continue;
    for (std::size_t i = 1; i < f.members.size(); ++i) entity_internal_[f.members[i]] = true;
    if (g.concept_at(f.head).label != "name") continue;
    for (std::size_t r : g.incoming(f.head)) {
      const Relation &rel = g.relations()[r];
      if (rel.role == ":name" && pruned_.spans[rel.source] == pruned_.spans[f.head]) {
        entity_internal_[f.head] = true;
        break;
      }
    }
  }
  std::set<Span> spans(pruned_.spans.begin(), pruned_.spans.end());
  aligned_spans_.assign(spans.begin(), spans.end());
  ledger_ = EdgeLedger(g);
  derived_of_.assign(g.size(), kNoNode);
}

std::optional<NodeId> Oracle::GoldOf(NodeId derived) const {
  if (derived >= gold_of_.size() || gold_of_[derived] == kNoNode) return std::nullopt;
  return gold_of_[derived];
}

void Oracle::Bind(NodeId gold, NodeId derived) {
  derived_of_[gold] = derived;
  if (gold_of_.size() <= derived) gold_of_.resize(derived + 1, kNoNode);
  gold_of_[derived] = gold;
}

std::string Oracle::LabelOf(NodeId gold) const {
  const Concept &c = pruned_.graph.concept_at(gold);
  return c.is_literal() ? PenmanLiteral(c) : c.label;
}

Oracle::Decision Oracle::Decide(const ParserState &s) const {
  const StackItem *b0 = s.b0();
  if (!b0) {
    if (s.s0()) return {{ActionTag::kReduce, ""}, {}, {}};
    throw Error(ErrorCode::kOracle, "no action for a terminal state");
  }
  return b0->is_word() ? DecideWord(s) : DecideConcept(s);
}

Oracle::Decision Oracle::DecideWord(const ParserState &s) const {
  const AmrGraph &g = pruned_.graph;
  const StackItem &b0 = *s.b0();
  const Span here = *b0.span;
  auto covering = std::find_if(aligned_spans_.begin(), aligned_spans_.end(),
                               [&](const Span &sp) { return sp.Contains(here); });
  if (covering == aligned_spans_.end()) return {{ActionTag::kDrop, ""}, {}, {}};
  const StackItem *b1 = s.b1();
  if (b1 && b1->is_word() && covering->Contains(*b1->span)) {
    return {{ActionTag::kMerge, ""}, {}, {}};
  }
  if (*covering != here) {
    throw Error(ErrorCode::kOracle, "span " + FormatSpan(here) + " stops inside aligned span " +
                                        FormatSpan(*covering));
  }

  std::vector<NodeId> open;  // underived, non-internal concepts on this span
  std::vector<NodeId> groups;
  for (NodeId n = 0; n < g.size(); ++n) {
    if (pruned_.spans[n] != here || Derived(n) || entity_internal_[n]) continue;
    open.push_back(n);
    const Concept &c = g.concept_at(n);
    if (c.is_literal()) continue;
    bool group = c.label == "date-entity" || c.label == "name";
    if (!group) {
      if (std::optional<NodeId> name = g.Child(n, ":name")) {
        group = entity_internal_[*name] && pruned_.spans[*name] == here;
      }
    }
    if (group) groups.push_back(n);
  }
  if (open.empty()) return {{ActionTag::kDrop, ""}, {}, {}};
  NodeId deepest = *std::max_element(open.begin(), open.end(), [&](NodeId a, NodeId b) {
    return depth_[a] < depth_[b] || (depth_[a] == depth_[b] && a > b);
  });
  if (groups.size() == 1 && depth_[groups.front()] >= depth_[deepest]) {
    return {{ActionTag::kEntity, g.concept_at(groups.front()).label}, groups.front(), {}};
  }
  return {{ActionTag::kConfirm, LabelOf(deepest)}, deepest, {}};
}

bool Oracle::Pending(const ParserState &s, NodeId gold) const {
  const AmrGraph &g = pruned_.graph;
  if (ledger_.unprocessed(gold) == 0) return false;
  int next_word = static_cast<int>(tokens_.size());
  std::set<Span> buffer_spans;
  std::set<NodeId> buffer_nodes;
  for (const StackItem &item : s.beta) {
    if (item.is_word()) {
      next_word = std::min(next_word, item.span->start);
    } else {
      if (item.span) buffer_spans.insert(*item.span);
      if (std::optional<NodeId> gnode = GoldOf(item.node)) buffer_nodes.insert(*gnode);
    }
  }
  auto future = [&](NodeId other) {
    if (Derived(other)) return buffer_nodes.count(other) > 0;
    const Span &sp = pruned_.spans[other];
    return sp.start >= next_word || buffer_spans.count(sp) > 0;
  };
  for (std::size_t r : g.outgoing(gold)) {
    if (!ledger_.processed(r) && future(g.relations()[r].target)) return true;
  }
  for (std::size_t r : g.incoming(gold)) {
    if (!ledger_.processed(r) && future(g.relations()[r].source)) return true;
  }
  return false;
}

Oracle::Decision Oracle::DecideConcept(const ParserState &s) const {
  const AmrGraph &g = pruned_.graph;
  const StackItem &b0 = *s.b0();
  std::optional<NodeId> x = GoldOf(b0.node);
  if (!x) throw Error(ErrorCode::kOracle, "buffer concept has no gold counterpart");
  const Span &here = pruned_.spans[*x];

  // Same-span concepts still missing: parents first, then children, then
  // the rest; deepest first within each group.
  std::vector<NodeId> parents = g.Parents(*x);
  std::vector<NodeId> children;
  for (std::size_t r : g.outgoing(*x)) children.push_back(g.relations()[r].target);
  std::vector<NodeId> everyone(g.size());
  std::iota(everyone.begin(), everyone.end(), 0);
  for (const std::vector<NodeId> *pool : {&parents, &children, &everyone}) {
    std::optional<NodeId> pick;
    for (NodeId n : *pool) {
      if (Derived(n) || entity_internal_[n] || pruned_.spans[n] != here) continue;
      if (!pick || depth_[n] > depth_[*pick] || (depth_[n] == depth_[*pick] && n < *pick)) {
        pick = n;
      }
    }
    if (pick) return {{ActionTag::kNew, LabelOf(*pick)}, *pick, {}};
  }

  const StackItem *s0 = s.s0();
  if (!s0) return {{ActionTag::kShift, ""}, {}, {}};
  std::optional<NodeId> y = GoldOf(s0->node);
  if (y) {
    for (std::size_t r : g.outgoing(*x)) {
      if (!ledger_.processed(r) && g.relations()[r].target == *y) {
        return {{ActionTag::kLeft, g.relations()[r].role}, {}, r};
      }
    }
    for (std::size_t r : g.incoming(*x)) {
      if (!ledger_.processed(r) && g.relations()[r].source == *y) {
        return {{ActionTag::kRight, g.relations()[r].role}, {}, r};
      }
    }
  }

  bool deeper = false;
  for (std::size_t i = 0; i + 1 < s.sigma.size() && !deeper; ++i) {
    std::optional<NodeId> z = GoldOf(s.sigma[i].node);
    if (!z) continue;
    for (std::size_t r : g.outgoing(*x)) {
      if (!ledger_.processed(r) && g.relations()[r].target == *z) deeper = true;
    }
    for (std::size_t r : g.incoming(*x)) {
      if (!ledger_.processed(r) && g.relations()[r].source == *z) deeper = true;
    }
  }
  bool pending = y && Pending(s, *y);
  if (deeper) return {{pending ? ActionTag::kCache : ActionTag::kReduce, ""}, {}, {}};
  if (!pending) return {{ActionTag::kReduce, ""}, {}, {}};
  return {{ActionTag::kShift, ""}, {}, {}};
}

Action Oracle::NextAction(const ParserState &s) const { return Decide(s).action; }

Action Oracle::Step(ParserState &s) {
  Decision d = Decide(s);
  ApplyInPlace(s, d.action);
  switch (d.action.tag) {
    case ActionTag::kConfirm:
    case ActionTag::kNew:
      Bind(*d.gold, s.beta.front().node);
      break;
    case ActionTag::kEntity: {
      const AmrGraph &g = pruned_.graph;
      NodeId head = s.beta.front().node;
      Bind(*d.gold, head);
      std::vector<NodeId> todo{head};
      while (!todo.empty()) {
        NodeId dn = todo.back();
        todo.pop_back();
        NodeId gn = gold_of_[dn];
        for (std::size_t dr : s.derived.outgoing(dn)) {
          const Relation &built = s.derived.relations()[dr];
          for (std::size_t r : g.outgoing(gn)) {
            const Relation &rel = g.relations()[r];
            if (ledger_.processed(r) || rel.role != built.role || Derived(rel.target)) continue;
            Bind(rel.target, built.target);
            ledger_.Mark(r);
            todo.push_back(built.target);
            break;
          }
        }
      }
      break;
    }
    case ActionTag::kLeft:
    case ActionTag::kRight:
      ledger_.Mark(*d.edge);
      break;
    default:
      break;
  }
  return d.action;
}

OracleRun RunOracle(const std::vector<std::string> &tokens, const AmrGraph &gold,
                    const CandidateAlignment &alignment, const SmatchOptions &smatch) {
  OracleRun run;
  run.sentence_length = tokens.size();
  std::optional<Oracle> oracle;
  try {
    oracle.emplace(tokens, gold, alignment);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kPrune) throw;
    run.usable = false;
    run.note = e.what();
    run.score = ScoreFromCounts(0, 0, 1);
    return run;
  }
  ParserState state = InitialState(tokens);
  const std::size_t n = tokens.size() + oracle->pruned().graph.size() +
                        oracle->pruned().graph.relations().size();
  const std::size_t guard = 4 * n * n + 64;
  while (!IsTerminal(state)) {
    if (state.history.size() > guard) {
      throw Error(ErrorCode::kOracle, "oracle did not terminate within " +
                                          std::to_string(guard) + " steps");
    }
    oracle->Step(state);
  }
  run.actions = state.history;
  run.action_count = run.actions.size();
  run.parsed = ExtractGraph(state);
  run.score = Smatch(run.parsed, gold, smatch);
  return run;
}

std::size_t CountActions(const std::vector<Action> &actions, ActionTag tag) {
  return static_cast<std::size_t>(std::count_if(
      actions.begin(), actions.end(), [tag](const Action &a) { return a.tag == tag; }));
}

TuneResult Tune(const std::vector<std::string> &tokens, const AmrGraph &gold,
                const std::vector<CandidateAlignment> &candidates, const SmatchOptions &smatch,
                unsigned jobs) {
  if (candidates.empty()) throw Error(ErrorCode::kInput, "no candidate alignments to tune");
  TuneResult result;
  result.runs.resize(candidates.size());
  ParallelFor(candidates.size(), jobs, [&](std::size_t i) {
    result.runs[i] = RunOracle(tokens, gold, candidates[i], smatch);
  });
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const OracleRun &a = result.runs[i];
    const OracleRun &best = result.runs[result.best];
    if (a.score.f1 > best.score.f1 ||
        (a.score.f1 == best.score.f1 && a.usable && best.usable &&
         a.action_count < best.action_count) ||
        (a.score.f1 == best.score.f1 && a.usable && !best.usable)) {
      result.best = i;
    }
  }
  result.alignment = candidates[result.best];
  result.run = result.runs[result.best];
  return result;
}

ActionStats ComputeActionStats(const std::vector<OracleRun> &runs, std::size_t bucket_width) {
  if (runs.empty()) throw Error(ErrorCode::kStats, "no oracle runs to summarize");
  if (bucket_width == 0) throw Error(ErrorCode::kStats, "bucket width must be positive");
  ActionStats stats;
  std::map<std::size_t, std::pair<std::size_t, double>> buckets;
  double total = 0;
  for (const OracleRun &r : runs) {
    total += static_cast<double>(r.action_count);
    auto &b = buckets[r.sentence_length / bucket_width];
    ++b.first;
    b.second += static_cast<double>(r.action_count);
  }
  stats.mean = total / static_cast<double>(runs.size());
  for (const auto &[index, b] : buckets) {
    stats.histogram.push_back({index * bucket_width, (index + 1) * bucket_width - 1, b.first,
                               b.second / static_cast<double>(b.first)});
  }
  return stats;
}

}  // namespace amrkit
