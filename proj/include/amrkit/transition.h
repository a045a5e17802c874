#ifndef AMRKIT_TRANSITION_H_
#define AMRKIT_TRANSITION_H_

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amrkit/graph.h"
#include "amrkit/span.h"

namespace amrkit {

// Row order of the action table; also the decoder's tie-break order.
enum class ActionTag { kDrop, kMerge, kConfirm, kEntity, kNew, kLeft, kRight, kCache, kShift, kReduce };

inline constexpr int kNumActionTags = 10;

const char *ActionTagName(ActionTag tag);  // "DROP", "CONFIRM", ...
std::optional<ActionTag> ParseActionTag(std::string_view name);
bool TagTakesLabel(ActionTag tag);

struct Action {
  ActionTag tag = ActionTag::kDrop;
  // Concept label (Confirm/Entity/New, Penman form so strings stay quoted)
  // or role (Left/Right). Empty otherwise.
  std::string label;

  auto operator<=>(const Action &) const = default;
};

// `TAG` or `TAG(label)`.
std::string FormatAction(const Action &a);
Action ParseAction(std::string_view text);

struct StackItem {
  enum class Kind { kWord, kConcept };

  Kind kind = Kind::kWord;
  std::vector<std::string> words;  // surface tokens (several after Merge)
  std::optional<Span> span;        // tokens this item came from
  NodeId node = kNoNode;           // derived concept, for kConcept

  bool is_word() const { return kind == Kind::kWord; }
  bool is_concept() const { return kind == Kind::kConcept; }
};

// (sigma, delta, beta, A). Sigma's top and delta's head are the vector
// back and deque front; beta's front is b0. Arcs live in `derived`.
struct ParserState {
  std::vector<std::string> tokens;
  std::vector<StackItem> sigma;
  std::deque<StackItem> delta;
  std::deque<StackItem> beta;
  AmrGraph derived;
  std::vector<Action> history;

  const StackItem *s0() const { return sigma.empty() ? nullptr : &sigma.back(); }
  const StackItem *b0() const { return beta.empty() ? nullptr : &beta.front(); }
  const StackItem *b1() const { return beta.size() < 2 ? nullptr : &beta[1]; }
};

ParserState InitialState(const std::vector<std::string> &tokens);

std::set<ActionTag> LegalActions(const ParserState &s);
// Tag legality plus label checks (duplicate arcs, arcs out of literals).
bool IsLegal(const ParserState &s, const Action &a);
// Throws a transition error naming the violated pattern.
ParserState Apply(const ParserState &s, const Action &a);
void ApplyInPlace(ParserState &s, const Action &a);

bool IsTerminal(const ParserState &s);
// Roots are derived non-literal concepts without incoming arcs; several
// roots hang under a synthetic multi-sentence concept.
AmrGraph ExtractGraph(const ParserState &s);

// Unquoted numbers, `-`, `+` and the mode constants.
bool IsConstantAtom(std::string_view label);

// Nodes created by Entity(label) over `words`: the head, then the internal
// fragment. Returned as (role, parent index, concept) so callers can mirror
// the construction.
struct EntityPart {
  std::string role;
  std::size_t parent = 0;  // index into the returned list
  std::string label;
  LiteralKind literal = LiteralKind::kNone;
};
std::vector<EntityPart> EntityParts(const std::string &label,
                                    const std::vector<std::string> &words);

}  // namespace amrkit

#endif  // AMRKIT_TRANSITION_H_
