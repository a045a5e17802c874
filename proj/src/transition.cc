#include "amrkit/transition.h"

#include <algorithm>
#include <array>
#include <map>

#include "amrkit/error.h"
#include "amrkit/text.h"

namespace amrkit {

namespace {

constexpr std::array<const char *, kNumActionTags> kTagNames = {
    "DROP", "MERGE", "CONFIRM", "ENTITY", "NEW", "LEFT", "RIGHT", "CACHE", "SHIFT", "REDUCE"};

[[noreturn]] void Illegal(const Action &a, const std::string &why) {
  throw Error(ErrorCode::kTransition, FormatAction(a) + " is illegal: " + why);
}

std::string Unquote(std::string_view quoted) {
  std::string out;
  for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
    if (quoted[i] == '\\' && i + 2 < quoted.size()) ++i;
    out.push_back(quoted[i]);
  }
  return out;
}

NodeId AddLabel(AmrGraph &g, const std::string &label) {
  if (label.size() >= 2 && label.front() == '"' && label.back() == '"') {
    return g.AddLiteral(Unquote(label), LiteralKind::kString);
  }
  if (IsConstantAtom(label)) return g.AddLiteral(label, LiteralKind::kSymbol);
  return g.AddConcept("v" + std::to_string(g.size()), label);
}

// (source, target) of the arc a Left/Right would add.
std::pair<NodeId, NodeId> ArcEnds(const ParserState &s, ActionTag tag) {
  NodeId s0 = s.sigma.back().node;
  NodeId b0 = s.beta.front().node;
  return tag == ActionTag::kLeft ? std::make_pair(b0, s0) : std::make_pair(s0, b0);
}

std::string ArcProblem(const ParserState &s, const Action &a) {
  if (a.label.size() < 2 || a.label.front() != ':') return "relation label must start with ':'";
  auto [source, target] = ArcEnds(s, a.tag);
  if (s.derived.concept_at(source).is_literal()) return "arc would leave a constant";
  if (s.derived.HasRelation(source, target, a.label)) return "arc already exists";
  return "";
}

std::optional<long> Numeric(const std::string &token) {
  if (token.empty() || !std::all_of(token.begin(), token.end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  try {
    return std::stol(token);
  } catch (...) {
    return std::nullopt;
  }
}

// :year/:month/:day values read off the surface; empty when nothing fits.
std::vector<std::pair<std::string, long>> DateAttributes(const std::vector<std::string> &words) {
  std::map<std::string, long> found;
  for (const std::string &w : words) {
    std::vector<std::string> parts = Split(w, '-');
    if (parts.size() == 3 || parts.size() == 2) {
      std::optional<long> y = Numeric(parts[0]);
      std::optional<long> m = Numeric(parts[1]);
      std::optional<long> d = parts.size() == 3 ? Numeric(parts[2]) : std::optional<long>(0);
      if (y && m && d && parts[0].size() == 4) {
        found[":year"] = *y;
        found[":month"] = *m;
        if (parts.size() == 3) found[":day"] = *d;
        continue;
      }
    }
    if (std::optional<int> month = MonthNumber(w)) {
      found[":month"] = *month;
      continue;
    }
    if (std::optional<long> n = Numeric(w)) {
      if (w.size() == 4 || *n > 31) {
        found[":year"] = *n;
      } else {
        found[":day"] = *n;
      }
    }
  }
  std::vector<std::pair<std::string, long>> out;
  for (const char *role : {":year", ":month", ":day"}) {
    auto it = found.find(role);
    if (it != found.end()) out.emplace_back(role, it->second);
  }
  return out;
}

}  // namespace

const char *ActionTagName(ActionTag tag) { return kTagNames[static_cast<int>(tag)]; }

std::optional<ActionTag> ParseActionTag(std::string_view name) {
  for (int i = 0; i < kNumActionTags; ++i) {
    if (name == kTagNames[i]) return static_cast<ActionTag>(i);
  }
  return std::nullopt;
}

bool TagTakesLabel(ActionTag tag) {
  switch (tag) {
    case ActionTag::kConfirm:
    case ActionTag::kEntity:
    case ActionTag::kNew:
    case ActionTag::kLeft:
    case ActionTag::kRight:
      return true;
    default:
      return false;
  }
}

std::string FormatAction(const Action &a) {
  std::string out = ActionTagName(a.tag);
  if (TagTakesLabel(a.tag)) out += "(" + a.label + ")";
  return out;
}

Action ParseAction(std::string_view text) {
  std::string_view t = Trim(text);
  std::size_t open = t.find('(');
  std::string_view name = t.substr(0, open);
  std::optional<ActionTag> tag = ParseActionTag(name);
  if (!tag) throw Error(ErrorCode::kFormat, "unknown action '" + std::string(t) + "'");
  Action a{*tag, ""};
  if (open == std::string_view::npos) {
    if (TagTakesLabel(*tag)) {
      throw Error(ErrorCode::kFormat, std::string(name) + " needs a label");
    }
    return a;
  }
  if (t.back() != ')' || !TagTakesLabel(*tag) || t.size() < open + 3) {
    throw Error(ErrorCode::kFormat, "malformed action '" + std::string(t) + "'");
  }
  a.label = std::string(t.substr(open + 1, t.size() - open - 2));
  return a;
}

bool IsConstantAtom(std::string_view label) {
  if (label == "-" || label == "+" || label == "imperative" || label == "expressive" ||
      label == "interrogative") {
    return true;
  }
  if (label.empty()) return false;
  std::size_t i = label.front() == '-' ? 1 : 0;
  if (i >= label.size()) return false;
  bool digit = false;
  for (; i < label.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(label[i]))) {
      digit = true;
    } else if (label[i] != '.') {
      return false;
    }
  }
  return digit;
}

std::vector<EntityPart> EntityParts(const std::string &label,
                                    const std::vector<std::string> &words) {
  std::vector<EntityPart> parts{{"", 0, label, LiteralKind::kNone}};
  std::size_t name = 0;
  if (label == "date-entity") {
    auto attrs = DateAttributes(words);
    if (!attrs.empty()) {
      for (auto &[role, value] : attrs) {
        parts.push_back({role, 0, std::to_string(value), LiteralKind::kSymbol});
      }
      return parts;
    }
  } else if (label != "name") {
    parts.push_back({":name", 0, "name", LiteralKind::kNone});
    name = 1;
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    parts.push_back({":op" + std::to_string(i + 1), name, words[i], LiteralKind::kString});
  }
  return parts;
}

ParserState InitialState(const std::vector<std::string> &tokens) {
  if (tokens.empty()) throw Error(ErrorCode::kInput, "cannot parse an empty sentence");
  ParserState s;
  s.tokens = tokens;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    StackItem item;
    item.words = {tokens[static_cast<std::size_t>(i)]};
    item.span = Span{i, i + 1};
    s.beta.push_back(std::move(item));
  }
  return s;
}

bool IsTerminal(const ParserState &s) { return s.beta.empty() && s.sigma.empty(); }

std::set<ActionTag> LegalActions(const ParserState &s) {
  std::set<ActionTag> out;
  if (IsTerminal(s)) return out;
  const StackItem *b0 = s.b0();
  const StackItem *b1 = s.b1();
  const StackItem *s0 = s.s0();
  if (b0 && b0->is_word()) {
    // Dropping the last word would strand the deque.
    if (s.delta.empty() || s.beta.size() > 1) out.insert(ActionTag::kDrop);
    if (b1 && b1->is_word()) out.insert(ActionTag::kMerge);
    out.insert(ActionTag::kConfirm);
    out.insert(ActionTag::kEntity);
  }
  if (b0 && b0->is_concept()) {
    out.insert(ActionTag::kNew);
    out.insert(ActionTag::kShift);
    if (s0 && s0->is_concept()) {
      out.insert(ActionTag::kLeft);
      out.insert(ActionTag::kRight);
    }
  }
  if (s0 && b0) out.insert(ActionTag::kCache);
  if (s0 && s0->is_concept()) out.insert(ActionTag::kReduce);
  return out;
}

bool IsLegal(const ParserState &s, const Action &a) {
  if (!LegalActions(s).count(a.tag)) return false;
  if (TagTakesLabel(a.tag) && a.label.empty()) return false;
  if (a.tag == ActionTag::kLeft || a.tag == ActionTag::kRight) return ArcProblem(s, a).empty();
  return true;
}

void ApplyInPlace(ParserState &s, const Action &a) {
  if (IsTerminal(s)) Illegal(a, "state is terminal");
  if (!LegalActions(s).count(a.tag)) {
    const StackItem *b0 = s.b0();
    std::string pattern;
    switch (a.tag) {
      case ActionTag::kDrop:
        pattern = b0 && b0->is_word() ? "cannot drop the last word while the deque is non-empty"
                                      : "b0 must be a word";
        break;
      case ActionTag::kConfirm:
      case ActionTag::kEntity:
        pattern = "b0 must be a word or span";
        break;
      case ActionTag::kMerge:
        pattern = "b0 and b1 must both be words";
        break;
      case ActionTag::kNew:
      case ActionTag::kShift:
        pattern = "b0 must be a concept";
        break;
      case ActionTag::kLeft:
      case ActionTag::kRight:
        pattern = "s0 and b0 must both be concepts";
        break;
      case ActionTag::kCache:
        pattern = "needs a non-empty stack and buffer";
        break;
      case ActionTag::kReduce:
        pattern = "needs a concept on the stack";
        break;
    }
    Illegal(a, pattern);
  }
  if (TagTakesLabel(a.tag) && a.label.empty()) Illegal(a, "missing label");

  switch (a.tag) {
    case ActionTag::kDrop:
      s.beta.pop_front();
      break;
    case ActionTag::kMerge: {
      StackItem second = std::move(s.beta[1]);
      StackItem &first = s.beta.front();
      first.words.insert(first.words.end(), second.words.begin(), second.words.end());
      if (first.span && second.span) first.span->end = second.span->end;
      s.beta.erase(s.beta.begin() + 1);
      break;
    }
    case ActionTag::kConfirm: {
      StackItem &b0 = s.beta.front();
      b0.node = AddLabel(s.derived, a.label);
      b0.kind = StackItem::Kind::kConcept;
      break;
    }
    case ActionTag::kEntity: {
      if (IsConstantAtom(a.label) || a.label.front() == '"') {
        Illegal(a, "entity head must be a concept");
      }
      StackItem &b0 = s.beta.front();
      std::vector<NodeId> ids;
      for (const EntityPart &part : EntityParts(a.label, b0.words)) {
        NodeId id = part.literal == LiteralKind::kNone
                        ? s.derived.AddConcept("v" + std::to_string(s.derived.size()), part.label)
                        : s.derived.AddLiteral(part.label, part.literal);
        if (!ids.empty()) s.derived.AddRelation(ids[part.parent], id, part.role);
        ids.push_back(id);
      }
      b0.node = ids.front();
      b0.kind = StackItem::Kind::kConcept;
      break;
    }
    case ActionTag::kNew: {
      StackItem item;
      item.kind = StackItem::Kind::kConcept;
      item.span = s.beta.front().span;
      item.node = AddLabel(s.derived, a.label);
      s.beta.push_front(std::move(item));
      break;
    }
    case ActionTag::kLeft:
    case ActionTag::kRight: {
      std::string problem = ArcProblem(s, a);
      if (!problem.empty()) Illegal(a, problem);
      auto [source, target] = ArcEnds(s, a.tag);
      s.derived.AddRelation(source, target, a.label);
      break;
    }
    case ActionTag::kCache:
      s.delta.push_front(std::move(s.sigma.back()));
      s.sigma.pop_back();
      break;
    case ActionTag::kShift:
      for (StackItem &item : s.delta) s.sigma.push_back(std::move(item));
      s.delta.clear();
      s.sigma.push_back(std::move(s.beta.front()));
      s.beta.pop_front();
      break;
    case ActionTag::kReduce:
      s.sigma.pop_back();
      break;
  }
  s.history.push_back(a);
}

ParserState Apply(const ParserState &s, const Action &a) {
  ParserState next = s;
  ApplyInPlace(next, a);
  return next;
}

AmrGraph ExtractGraph(const ParserState &s) {
  if (!IsTerminal(s)) {
    throw Error(ErrorCode::kState, "cannot extract a graph before the derivation ends");
  }
  const AmrGraph &d = s.derived;
  std::vector<bool> keep(d.size(), true);
  for (NodeId id = 0; id < d.size(); ++id) {
    if (d.concept_at(id).is_literal() && d.incoming(id).empty()) keep[id] = false;
  }
  // Undirected components to find cycle-only pieces without a natural root.
  std::vector<std::size_t> component(d.size(), static_cast<std::size_t>(-1));
  std::size_t components = 0;
  for (NodeId start = 0; start < d.size(); ++start) {
    if (!keep[start] || component[start] != static_cast<std::size_t>(-1)) continue;
    std::vector<NodeId> todo{start};
    component[start] = components;
    while (!todo.empty()) {
      NodeId n = todo.back();
      todo.pop_back();
      auto visit = [&](NodeId m) {
        if (keep[m] && component[m] == static_cast<std::size_t>(-1)) {
          component[m] = components;
          todo.push_back(m);
        }
      };
      for (std::size_t r : d.outgoing(n)) visit(d.relations()[r].target);
      for (std::size_t r : d.incoming(n)) visit(d.relations()[r].source);
    }
    ++components;
  }
  std::vector<NodeId> roots;
  std::vector<bool> rooted(components, false);
  for (NodeId id = 0; id < d.size(); ++id) {
    if (keep[id] && !d.concept_at(id).is_literal() && d.incoming(id).empty()) {
      roots.push_back(id);
      rooted[component[id]] = true;
    }
  }
  for (NodeId id = 0; id < d.size(); ++id) {
    if (keep[id] && !d.concept_at(id).is_literal() && !rooted[component[id]]) {
      roots.push_back(id);
      rooted[component[id]] = true;
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<NodeId> remap;
  AmrGraph out = d.Subgraph(keep, &remap);
  if (roots.size() == 1) {
    out.SetRoot(remap[roots.front()]);
    return out;
  }
  NodeId top = out.AddConcept("top", "multi-sentence");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    out.AddRelation(top, remap[roots[i]], ":snt" + std::to_string(i + 1));
  }
  out.SetRoot(top);
  return out;
}

}  // namespace amrkit
