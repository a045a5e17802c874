#include "amrkit/aligner.h"

#include <algorithm>
#include <set>

#include "amrkit/error.h"
#include "amrkit/logging.h"
#include "amrkit/penman.h"
#include "amrkit/text.h"

namespace amrkit {

std::string FormatSpan(const Span &s) {
  return std::to_string(s.start) + "-" + std::to_string(s.end);
}

std::optional<Span> CandidateAlignment::SpanOf(NodeId head) const {
  auto it = records.find(head);
  if (it == records.end()) return std::nullopt;
  return it->second.span;
}

std::vector<std::optional<Span>> CandidateAlignment::NodeSpans(const AmrGraph &g) const {
  std::vector<std::optional<Span>> spans(g.size());
  for (const Fragment &f : ExtractFragments(g)) {
    std::optional<Span> s = SpanOf(f.head);
    if (!s) continue;
    for (NodeId m : f.members) spans[m] = s;
  }
  return spans;
}

bool CandidateAlignment::SameSpans(const CandidateAlignment &other) const {
  if (records.size() != other.records.size()) return false;
  auto a = records.begin();
  auto b = other.records.begin();
  for (; a != records.end(); ++a, ++b) {
    if (a->first != b->first || a->second.span != b->second.span) return false;
  }
  return true;
}

namespace {

const std::string &Token(const AlignContext &ctx, int i) {
  return ctx.tokens[static_cast<std::size_t>(i)];
}

std::set<std::string> Lemmas(const AlignContext &ctx, const std::string &token) {
  if (ctx.resources.lemmas) return ctx.resources.lemmas->Lookup(token);
  return {Lowercase(token)};
}

// Fragments the concept-level rules apply to: single non-literal concepts
// other than `name` and date-entity heads.
bool IsPlainConcept(const AlignContext &ctx, const Fragment &f) {
  if (f.members.size() != 1) return false;
  const Concept &c = ctx.graph.concept_at(f.head);
  return !c.is_literal() && c.label != "name" && c.label != "date-entity";
}

bool HasIncomingRole(const AmrGraph &g, NodeId id, const std::string &role) {
  for (std::size_t r : g.incoming(id)) {
    if (g.relations()[r].role == role) return true;
  }
  return false;
}

// :opN children of a name node ordered by N.
std::vector<std::string> NameOps(const AmrGraph &g, NodeId name) {
  std::vector<std::pair<int, std::string>> ops;
  for (std::size_t r : g.outgoing(name)) {
    const Relation &rel = g.relations()[r];
    if (rel.role.rfind(":op", 0) != 0) continue;
    const Concept &t = g.concept_at(rel.target);
    if (!t.is_literal()) continue;
    int n = 0;
    try {
      n = std::stoi(rel.role.substr(3));
    } catch (...) {
      continue;
    }
    ops.emplace_back(n, t.label);
  }
  std::sort(ops.begin(), ops.end());
  std::vector<std::string> out;
  for (auto &[n, s] : ops) out.push_back(s);
  return out;
}

bool IsNameFragment(const AlignContext &ctx, const Fragment &f) {
  const Concept &c = ctx.graph.concept_at(f.head);
  return !c.is_literal() && c.label == "name";
}

template <typename Pred>
bool EachOpMatches(const AlignContext &ctx, const Fragment &f, const Span &span,
                   Pred pred) {
  if (!IsNameFragment(ctx, f)) return false;
  std::vector<std::string> ops = NameOps(ctx.graph, f.head);
  if (ops.empty() || static_cast<int>(ops.size()) != span.length()) return false;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!pred(ops[i], Token(ctx, span.start + static_cast<int>(i)))) return false;
  }
  return true;
}

bool ExactConcept(const AlignContext &ctx, const Fragment &f, const Span &span) {
  if (span.length() != 1 || f.members.size() != 1) return false;
  const std::string &token = Token(ctx, span.start);
  const Concept &c = ctx.graph.concept_at(f.head);
  if (c.is_literal()) {
    if (c.label == "-" && HasIncomingRole(ctx.graph, f.head, ":polarity")) {
      return IsNegationWord(token);
    }
    if (std::optional<std::string> number = CanonicalNumber(c.label)) {
      std::optional<long> value = TokenNumber(token);
      return value && std::to_string(*value) == *number;
    }
    return Lowercase(c.label) == Lowercase(token);
  }
  if (!IsPlainConcept(ctx, f)) return false;
  std::string base = Lowercase(StripSense(c.label));
  return Lemmas(ctx, token).count(base) > 0;
}

bool NamedEntity(const AlignContext &ctx, const Fragment &f, const Span &span) {
  return EachOpMatches(ctx, f, span, [](const std::string &op, const std::string &tok) {
    return op == tok || Lowercase(op) == Lowercase(tok);
  });
}

bool IsPunctuation(const std::string &token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](unsigned char c) {
    return std::ispunct(c);
  });
}

bool DateEntity(const AlignContext &ctx, const Fragment &f, const Span &span) {
  const AmrGraph &g = ctx.graph;
  const Concept &head = g.concept_at(f.head);
  if (head.is_literal() || head.label != "date-entity") return false;
  std::map<std::string, long> wanted;
  for (std::size_t r : f.internal_relations) {
    const Relation &rel = g.relations()[r];
    if (rel.role != ":year" && rel.role != ":month" && rel.role != ":day") continue;
    if (std::optional<long> v = TokenNumber(g.concept_at(rel.target).label)) {
      wanted[rel.role] = *v;
    }
  }
  if (wanted.empty()) return false;
  std::set<std::string> covered;
  for (int i = span.start; i < span.end; ++i) {
    const std::string &token = Token(ctx, i);
    bool edge = i == span.start || i == span.end - 1;
    bool hit = false;
    std::vector<std::string> parts = Split(token, '-');
    if (parts.size() >= 2 && parts.size() <= 3) {
      // ISO-style yyyy-mm(-dd)
      static const char *kRoles[] = {":year", ":month", ":day"};
      bool all = true;
      std::set<std::string> local;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        std::optional<long> v = TokenNumber(parts[k]);
        auto it = wanted.find(kRoles[k]);
        if (!v || it == wanted.end() || it->second != *v) {
          all = false;
          break;
        }
        local.insert(kRoles[k]);
      }
      if (all) {
        covered.insert(local.begin(), local.end());
        hit = true;
      }
    }
    if (!hit) {
      if (std::optional<int> month = MonthNumber(token)) {
        auto it = wanted.find(":month");
        if (it != wanted.end() && it->second == *month) {
          covered.insert(":month");
          hit = true;
        }
      }
    }
    if (!hit && std::all_of(token.begin(), token.end(),
                            [](unsigned char c) { return std::isdigit(c); })) {
      long v = std::stol(token);
      for (const auto &[role, value] : wanted) {
        if (value == v && !covered.count(role)) {
          covered.insert(role);
          hit = true;
          break;
        }
      }
    }
    if (!hit && !(IsPunctuation(token) && !edge)) return false;
  }
  return covered.size() == wanted.size();
}

bool FuzzyPrefix(const AlignContext &ctx, const Fragment &f, const Span &span) {
  if (span.length() != 1 || !IsPlainConcept(ctx, f)) return false;
  std::string base = Lowercase(StripSense(ctx.graph.concept_at(f.head).label));
  return CommonPrefixLength(base, Lowercase(Token(ctx, span.start))) >= 4;
}

bool EntityType(const AlignContext &ctx, const Fragment &f, const Fragment &trigger,
                const Span &) {
  if (f.members.size() != 1 || !IsNameFragment(ctx, trigger)) return false;
  const AmrGraph &g = ctx.graph;
  if (g.kind(f.head) != ConceptKind::kEntityType) return false;
  return g.HasRelation(f.head, trigger.head, ":name");
}

bool HasNegativeAffix(const std::string &token, const std::string &base) {
  std::string lower = Lowercase(token);
  if (lower.size() > 3 && lower.compare(lower.size() - 3, 3, "n't") == 0) return true;
  static const char *kPrefixes[] = {"non", "dis", "un", "in", "im", "il", "ir"};
  for (const char *prefix : kPrefixes) {
    std::string p(prefix);
    if (lower.rfind(p, 0) != 0) continue;
    std::string rest = lower.substr(p.size());
    if (!rest.empty() && rest.front() == '-') rest.erase(rest.begin());
    if (CommonPrefixLength(rest, base) >= std::min<std::size_t>(4, base.size())) {
      return true;
    }
  }
  return false;
}

bool MinusPolarity(const AlignContext &ctx, const Fragment &f, const Fragment &trigger,
                   const Span &span) {
  const AmrGraph &g = ctx.graph;
  const Concept &c = g.concept_at(f.head);
  if (!c.is_literal() || c.label != "-" || span.length() != 1) return false;
  if (!g.HasRelation(trigger.head, f.head, ":polarity")) return false;
  std::string base = Lowercase(StripSense(g.concept_at(trigger.head).label));
  return HasNegativeAffix(Token(ctx, span.start), base);
}

bool Quantity(const AlignContext &ctx, const Fragment &f, const Fragment &trigger,
              const Span &) {
  const AmrGraph &g = ctx.graph;
  const Concept &c = g.concept_at(f.head);
  if (c.is_literal() || f.members.size() != 1) return false;
  const std::string suffix = "-quantity";
  if (c.label.size() <= suffix.size() ||
      c.label.compare(c.label.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return false;
  }
  const Concept &t = g.concept_at(trigger.head);
  return t.is_literal() && CanonicalNumber(t.label).has_value() &&
         g.HasRelation(f.head, trigger.head, ":quant");
}

bool SemanticNamedEntity(const AlignContext &ctx, const Fragment &f, const Span &span) {
  const EmbeddingTable *emb = ctx.resources.embeddings;
  if (!emb) return false;
  double threshold = ctx.resources.cosine_threshold;
  return EachOpMatches(ctx, f, span, [&](const std::string &op, const std::string &tok) {
    return SemanticMatch(*emb, op, tok, threshold);
  });
}

const LemmaTable &EmptyLemmas() {
  static const LemmaTable empty;
  return empty;
}

bool MorphNamedEntity(const AlignContext &ctx, const Fragment &f, const Span &span) {
  const MorphLinkTable *morph = ctx.resources.morph;
  if (!morph) return false;
  const LemmaTable &lemmas = ctx.resources.lemmas ? *ctx.resources.lemmas : EmptyLemmas();
  return EachOpMatches(ctx, f, span, [&](const std::string &op, const std::string &tok) {
    return MorphMatch(*morph, lemmas, op, tok);
  });
}

bool SemanticConcept(const AlignContext &ctx, const Fragment &f, const Span &span) {
  const EmbeddingTable *emb = ctx.resources.embeddings;
  if (!emb || span.length() != 1 || !IsPlainConcept(ctx, f)) return false;
  return SemanticMatch(*emb, ctx.graph.concept_at(f.head).label, Token(ctx, span.start),
                       ctx.resources.cosine_threshold);
}

bool MorphConcept(const AlignContext &ctx, const Fragment &f, const Span &span) {
  const MorphLinkTable *morph = ctx.resources.morph;
  if (!morph || span.length() != 1 || !IsPlainConcept(ctx, f)) return false;
  const LemmaTable &lemmas = ctx.resources.lemmas ? *ctx.resources.lemmas : EmptyLemmas();
  return MorphMatch(*morph, lemmas, ctx.graph.concept_at(f.head).label,
                    Token(ctx, span.start));
}

Rule Matching(std::string name,
              std::function<bool(const AlignContext &, const Fragment &, const Span &)> fn) {
  return Rule{std::move(name), RuleKind::kMatching, std::move(fn), nullptr};
}

Rule Updating(std::string name,
              std::function<bool(const AlignContext &, const Fragment &, const Fragment &,
                                 const Span &)>
                  fn) {
  return Rule{std::move(name), RuleKind::kUpdating, nullptr, std::move(fn)};
}

}  // namespace

std::vector<Rule> BaseRuleSet() {
  return {
      Matching("exact-concept", ExactConcept),
      Matching("named-entity", NamedEntity),
      Matching("date-entity", DateEntity),
      Matching("fuzzy-prefix-4", FuzzyPrefix),
      Updating("entity-type", EntityType),
      Updating("minus-polarity", MinusPolarity),
      Updating("quantity", Quantity),
  };
}

std::vector<Rule> ExtendedRuleSet() {
  return {
      Matching("semantic-named-entity", SemanticNamedEntity),
      Matching("morphological-named-entity", MorphNamedEntity),
      Matching("semantic-concept", SemanticConcept),
      Matching("morphological-concept", MorphConcept),
  };
}

std::vector<Rule> CombinedRuleSet(bool extended) {
  std::vector<Rule> base = BaseRuleSet();
  std::vector<Rule> out;
  for (Rule &r : base) {
    if (r.kind == RuleKind::kMatching) out.push_back(r);
  }
  if (extended) {
    for (Rule &r : ExtendedRuleSet()) out.push_back(std::move(r));
  }
  for (Rule &r : base) {
    if (r.kind == RuleKind::kUpdating) out.push_back(std::move(r));
  }
  return out;
}

namespace {

class CandidateSearch {
 public:
  CandidateSearch(const std::vector<NodeId> &heads,
                  const std::vector<std::vector<AlignmentRecord>> &records,
                  std::size_t limit)
      : heads_(heads), records_(records), limit_(limit), chosen_(heads.size()) {
    for (std::size_t f = 0; f < heads.size(); ++f) index_of_[heads[f]] = f;
  }

  std::vector<CandidateAlignment> Run() {
    Search(0);
    return std::move(out_);
  }

 private:
  bool Done() const { return limit_ != 0 && out_.size() >= limit_; }

  bool Compatible(std::size_t f, const AlignmentRecord &r) const {
    for (std::size_t g = 0; g < f; ++g) {
      const std::optional<AlignmentRecord> &other = chosen_[g];
      if (!other) continue;
      // Distinct spans may not partially overlap.
      if (other->span != r.span && other->span.Overlaps(r.span)) return false;
      // A record produced by an updating rule needs its trigger fragment
      // on the very same span.
      if (r.trigger && *r.trigger == heads_[g] && other->span != r.span) return false;
      if (other->trigger && *other->trigger == heads_[f] && other->span != r.span) {
        return false;
      }
    }
    if (r.trigger) {
      auto it = index_of_.find(*r.trigger);
      if (it == index_of_.end()) return false;
      // Trigger fragment without records can never supply the span.
      if (it->second < f && !chosen_[it->second]) return false;
      if (it->second > f && records_[it->second].empty()) return false;
    }
    return true;
  }

  void Search(std::size_t f) {
    if (Done()) return;
    if (f == heads_.size()) {
      CandidateAlignment c;
      std::vector<std::optional<Span>> key;
      for (std::size_t g = 0; g < heads_.size(); ++g) {
        if (chosen_[g]) c.records.emplace(heads_[g], *chosen_[g]);
        key.push_back(chosen_[g] ? std::optional<Span>(chosen_[g]->span) : std::nullopt);
      }
      if (seen_.insert(std::move(key)).second) out_.push_back(std::move(c));
      return;
    }
    if (records_[f].empty()) {
      chosen_[f].reset();
      Search(f + 1);
      return;
    }
    for (const AlignmentRecord &r : records_[f]) {
      if (!Compatible(f, r)) continue;
      chosen_[f] = r;
      Search(f + 1);
      chosen_[f].reset();
      if (Done()) return;
    }
  }

  const std::vector<NodeId> &heads_;
  const std::vector<std::vector<AlignmentRecord>> &records_;
  std::size_t limit_;
  std::map<NodeId, std::size_t> index_of_;
  std::vector<std::optional<AlignmentRecord>> chosen_;
  std::set<std::vector<std::optional<Span>>> seen_;
  std::vector<CandidateAlignment> out_;
};

}  // namespace

std::vector<CandidateAlignment> EnumerateCandidates(
    const std::vector<NodeId> &heads,
    const std::vector<std::vector<AlignmentRecord>> &records, std::size_t limit) {
  if (heads.size() != records.size()) {
    throw Error(ErrorCode::kInput, "one record list per fragment expected");
  }
  std::vector<std::vector<AlignmentRecord>> sorted = records;
  for (auto &list : sorted) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::vector<CandidateAlignment> out = CandidateSearch(heads, sorted, limit).Run();
  if (out.empty()) out.emplace_back();  // everything unaligned
  return out;
}

AlignmentSet EnumerateAlignments(const AmrGraph &g, const std::vector<std::string> &tokens,
                                 const std::vector<Rule> &rules,
                                 const AlignResources &resources,
                                 const AlignerOptions &options) {
  if (tokens.empty()) throw Error(ErrorCode::kInput, "empty sentence");
  std::vector<Fragment> fragments = ExtractFragments(g);
  AlignContext ctx{g, fragments, tokens, resources};
  const std::size_t nf = fragments.size();
  const int n = static_cast<int>(tokens.size());

  // A_c with the priority (rule index) that first produced each record.
  std::vector<std::map<AlignmentRecord, std::size_t>> found(nf);
  std::map<NodeId, std::size_t> fragment_of_head;
  for (std::size_t f = 0; f < nf; ++f) fragment_of_head[fragments[f].head] = f;

  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const Rule &rule = rules[ri];
    if (rule.kind != RuleKind::kMatching) continue;
    for (int s = 0; s < n; ++s) {
      for (int e = s + 1; e <= n; ++e) {
        Span span{s, e};
        for (std::size_t f = 0; f < nf; ++f) {
          if (rule.match(ctx, fragments[f], span)) {
            found[f].try_emplace(AlignmentRecord{span, std::nullopt}, ri);
          }
        }
      }
    }
  }

  bool updated = true;
  while (updated) {
    updated = false;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      const Rule &rule = rules[ri];
      if (rule.kind != RuleKind::kUpdating) continue;
      for (std::size_t c = 0; c < nf; ++c) {
        for (std::size_t t = 0; t < nf; ++t) {
          if (c == t) continue;
          std::vector<Span> spans;
          for (const auto &[rec, prio] : found[t]) spans.push_back(rec.span);
          for (const Span &span : spans) {
            AlignmentRecord rec{span, fragments[t].head};
            if (found[c].count(rec)) continue;
            if (rule.update(ctx, fragments[c], fragments[t], span)) {
              found[c].emplace(rec, ri);
              updated = true;
            }
          }
        }
      }
    }
  }

  AlignmentSet set;
  set.heads.reserve(nf);
  set.records.resize(nf);
  double product = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    set.heads.push_back(fragments[f].head);
    for (const auto &[rec, prio] : found[f]) set.records[f].push_back(rec);
    if (!found[f].empty()) product *= static_cast<double>(found[f].size());
  }

  std::vector<std::vector<AlignmentRecord>> usable = set.records;
  if (product > options.product_cap) {
    set.pruned = true;
    Warn("alignment product of " + std::to_string(product) +
         " candidates exceeds the cap; keeping the top " +
         std::to_string(options.per_fragment_cap) + " records per fragment");
    for (std::size_t f = 0; f < nf; ++f) {
      if (found[f].size() <= options.per_fragment_cap) continue;
      std::vector<std::pair<std::size_t, AlignmentRecord>> ranked;
      for (const auto &[rec, prio] : found[f]) ranked.emplace_back(prio, rec);
      std::sort(ranked.begin(), ranked.end());
      ranked.resize(options.per_fragment_cap);
      usable[f].clear();
      for (auto &[prio, rec] : ranked) usable[f].push_back(rec);
    }
  }

  set.candidates = EnumerateCandidates(set.heads, usable, options.limit);
  std::uint64_t key = GraphFingerprint(g);
  for (CandidateAlignment &c : set.candidates) c.graph_key = key;
  return set;
}

AlignmentScore AlignmentF1(const CandidateAlignment &pred, const CandidateAlignment &gold) {
  if (pred.graph_key != 0 && gold.graph_key != 0 && pred.graph_key != gold.graph_key) {
    throw Error(ErrorCode::kInput, "alignments refer to different graphs");
  }
  std::set<std::pair<NodeId, Span>> gold_pairs;
  for (const auto &[head, rec] : gold.records) gold_pairs.emplace(head, rec.span);
  std::size_t correct = 0;
  for (const auto &[head, rec] : pred.records) correct += gold_pairs.count({head, rec.span});
  AlignmentScore s;
  if (!pred.records.empty()) {
    s.precision = static_cast<double>(correct) / static_cast<double>(pred.records.size());
  }
  if (!gold.records.empty()) {
    s.recall = static_cast<double>(correct) / static_cast<double>(gold.records.size());
  }
  if (s.precision + s.recall > 0) {
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

std::string FormatAlignment(const AmrGraph &g, const CandidateAlignment &a) {
  std::vector<std::string> addresses = NodeAddresses(g);
  std::map<Span, std::vector<NodeId>> by_span;
  for (const auto &[head, rec] : a.records) by_span[rec.span].push_back(head);
  std::vector<std::string> items;
  for (const auto &[span, heads] : by_span) {
    std::vector<std::string> addr;
    for (NodeId h : heads) addr.push_back(addresses[h]);
    items.push_back(FormatSpan(span) + "|" + Join(addr, "+"));
  }
  return Join(items, " ");
}

CandidateAlignment ParseAlignment(const AmrGraph &g, const std::string &text) {
  std::vector<std::string> addresses = NodeAddresses(g);
  std::vector<Fragment> fragments = ExtractFragments(g);
  std::vector<std::size_t> fragment_of = FragmentIndex(g, fragments);
  CandidateAlignment a;
  a.graph_key = GraphFingerprint(g);
  for (const std::string &item : SplitWhitespace(text)) {
    std::size_t bar = item.find('|');
    std::size_t dash = item.find('-');
    if (bar == std::string::npos || dash == std::string::npos || dash > bar) {
      throw Error(ErrorCode::kFormat, "malformed alignment item '" + item + "'");
    }
    Span span;
    try {
      span.start = std::stoi(item.substr(0, dash));
      span.end = std::stoi(item.substr(dash + 1, bar - dash - 1));
    } catch (...) {
      throw Error(ErrorCode::kFormat, "malformed span in '" + item + "'");
    }
    if (span.start < 0 || span.end <= span.start) {
      throw Error(ErrorCode::kFormat, "empty span in '" + item + "'");
    }
    for (const std::string &addr : Split(item.substr(bar + 1), '+')) {
      auto it = std::find(addresses.begin(), addresses.end(), addr);
      if (it == addresses.end()) {
        throw Error(ErrorCode::kLookup, "no node at address " + addr);
      }
      NodeId node = static_cast<NodeId>(it - addresses.begin());
      NodeId head = fragments[fragment_of[node]].head;
      a.records[head] = AlignmentRecord{span, std::nullopt};
    }
  }
  return a;
}

}  // namespace amrkit
