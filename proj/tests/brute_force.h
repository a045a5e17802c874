#ifndef AMRKIT_TESTS_BRUTE_FORCE_H_
#define AMRKIT_TESTS_BRUTE_FORCE_H_

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "amrkit/aligner.h"

namespace amrkit::testing {

using SpanVector = std::vector<std::optional<Span>>;

// Reference for the candidate search: full Cartesian product of the record
// lists, then the legality filter, keyed by the span chosen per fragment.
inline std::set<SpanVector> BruteForceCandidates(
    const std::vector<NodeId> &heads, const std::vector<std::vector<AlignmentRecord>> &records) {
  std::set<SpanVector> out;
  std::vector<std::size_t> pick(heads.size(), 0);
  while (true) {
    std::map<NodeId, AlignmentRecord> chosen;
    for (std::size_t f = 0; f < heads.size(); ++f) {
      if (!records[f].empty()) chosen[heads[f]] = records[f][pick[f]];
    }
    bool legal = true;
    for (const auto &[h1, r1] : chosen) {
      for (const auto &[h2, r2] : chosen) {
        bool overlap = r1.span.start < r2.span.end && r2.span.start < r1.span.end;
        if (overlap && r1.span != r2.span) legal = false;
      }
      if (r1.trigger) {
        auto it = chosen.find(*r1.trigger);
        if (it == chosen.end() || it->second.span != r1.span) legal = false;
      }
    }
    if (legal) {
      SpanVector v;
      for (NodeId h : heads) {
        auto it = chosen.find(h);
        v.push_back(it == chosen.end() ? std::nullopt : std::optional<Span>(it->second.span));
      }
      out.insert(v);
    }
    std::size_t f = 0;
    while (f < heads.size()) {
      if (!records[f].empty() && ++pick[f] < records[f].size()) break;
      pick[f] = 0;
      ++f;
    }
    if (f == heads.size()) break;
  }
  if (out.empty()) out.insert(SpanVector(heads.size()));
  return out;
}

inline SpanVector SpansOf(const std::vector<NodeId> &heads, const CandidateAlignment &c) {
  SpanVector v;
  for (NodeId h : heads) v.push_back(c.SpanOf(h));
  return v;
}

}  // namespace amrkit::testing

#endif  // AMRKIT_TESTS_BRUTE_FORCE_H_
