#ifndef AMRKIT_PENMAN_H_
#define AMRKIT_PENMAN_H_

#include <string>
#include <string_view>
#include <vector>

#include "amrkit/graph.h"

namespace amrkit {

// Parses one Penman expression. Variables are kept as authored; repeated
// variables become extra relations into the same concept. Unquoted atoms
// shaped like variables (`x`, `n2`) that are never defined raise a
// structure error; other atoms are literals.
AmrGraph ParsePenman(std::string_view text);

struct SerializeOptions {
  bool normalize_vars = true;  // c0, c1, ... in visiting order
  bool single_line = false;
  int indent = 4;
};

std::string SerializePenman(const AmrGraph &g, const SerializeOptions &options = {});

// The spanning tree the serializer walks: for every defined node, the
// children it emits in order. Reference edges point at nodes defined
// elsewhere. Throws a serialization error for disconnected graphs.
struct SerialEdge {
  std::string role;  // as emitted (inverted when walked backwards)
  NodeId node;
  bool reference;
};

struct SerialTree {
  std::vector<NodeId> order;  // nodes in definition order
  std::vector<std::vector<SerialEdge>> children;
};

SerialTree BuildSerialTree(const AmrGraph &g);

// JAMR-style node addresses ("0", "0.1", "0.1.0") following the serializer
// walk. Only defining children are counted; re-entrant references are not.
std::vector<std::string> NodeAddresses(const AmrGraph &g);
// Throws a lookup error for unknown addresses.
NodeId NodeByAddress(const AmrGraph &g, const std::string &address);

}  // namespace amrkit

#endif  // AMRKIT_PENMAN_H_
