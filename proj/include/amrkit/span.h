#ifndef AMRKIT_SPAN_H_
#define AMRKIT_SPAN_H_

#include <compare>
#include <string>

namespace amrkit {

// Token span [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool Contains(const Span &other) const {
    return start <= other.start && other.end <= end;
  }
  bool Overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  auto operator<=>(const Span &) const = default;
};

std::string FormatSpan(const Span &s);  // "s-e"

}  // namespace amrkit

#endif  // AMRKIT_SPAN_H_
