#ifndef AMRKIT_SMATCH_H_
#define AMRKIT_SMATCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "amrkit/graph.h"

namespace amrkit {

struct InstanceTriple {
  std::size_t var;
  std::string label;
};

// Also carries the synthetic (root, TOP, label) triple.
struct AttributeTriple {
  std::size_t var;
  std::string role;
  std::string value;
};

struct RelationTriple {
  std::size_t source;
  std::string role;
  std::size_t target;
};

// Variables are the non-literal concepts; edges into literals become
// attribute triples and inverse roles are flipped.
struct TripleSet {
  std::vector<NodeId> variables;  // graph node per variable index
  std::vector<InstanceTriple> instances;
  std::vector<AttributeTriple> attributes;
  std::vector<RelationTriple> relations;

  std::size_t size() const {
    return instances.size() + attributes.size() + relations.size();
  }
};

TripleSet ToTriples(const AmrGraph &g);

struct SmatchResult {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t matched = 0;
  std::size_t test_total = 0;
  std::size_t gold_total = 0;
};

struct SmatchOptions {
  int restarts = 4;  // random restarts, on top of one label-matching start
  std::uint64_t seed = 1;
};

// Both-empty scores 1, one-empty scores 0.
SmatchResult ScoreFromCounts(std::size_t matched, std::size_t test_total,
                             std::size_t gold_total);

// Hill-climbing search for the variable mapping with the most matched
// triples. `test` is scored against `gold`: precision is over test triples.
SmatchResult Smatch(const AmrGraph &test, const AmrGraph &gold,
                    const SmatchOptions &options = {});

// Exact maximum over all injective mappings. Throws a size error when the
// smaller graph has more than 8 variables or the search space is too large.
SmatchResult ExhaustiveSmatch(const AmrGraph &test, const AmrGraph &gold);

}  // namespace amrkit

#endif  // AMRKIT_SMATCH_H_
