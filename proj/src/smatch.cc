#include "amrkit/smatch.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "amrkit/error.h"

namespace amrkit {

TripleSet ToTriples(const AmrGraph &g) {
  TripleSet t;
  if (g.empty() || !g.has_root()) return t;
  std::vector<std::size_t> var_of(g.size(), static_cast<std::size_t>(-1));
  for (NodeId id = 0; id < g.size(); ++id) {
    if (g.concept_at(id).is_literal()) continue;
    var_of[id] = t.variables.size();
    t.variables.push_back(id);
    t.instances.push_back({var_of[id], g.concept_at(id).label});
  }
  NodeId root = g.root();
  if (var_of[root] != static_cast<std::size_t>(-1)) {
    t.attributes.push_back({var_of[root], "TOP", g.concept_at(root).label});
  }
  std::set<std::tuple<std::size_t, std::string, std::string>> seen_attr;
  std::set<std::tuple<std::size_t, std::string, std::size_t>> seen_rel;
  for (const Relation &rel : g.relations()) {
    const Concept &target = g.concept_at(rel.target);
    if (target.is_literal()) {
      auto key = std::make_tuple(var_of[rel.source], rel.role, target.label);
      if (seen_attr.insert(key).second) {
        t.attributes.push_back({var_of[rel.source], rel.role, target.label});
      }
      continue;
    }
    std::size_t s = var_of[rel.source];
    std::size_t d = var_of[rel.target];
    std::string role = rel.role;
    if (IsInverseRole(role)) {
      role = InvertRole(role);
      std::swap(s, d);
    }
    if (seen_rel.insert({s, role, d}).second) t.relations.push_back({s, role, d});
  }
  return t;
}

SmatchResult ScoreFromCounts(std::size_t matched, std::size_t test_total,
                             std::size_t gold_total) {
  SmatchResult r;
  r.matched = matched;
  r.test_total = test_total;
  r.gold_total = gold_total;
  if (test_total == 0 && gold_total == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  if (test_total == 0 || gold_total == 0) return r;
  r.precision = static_cast<double>(matched) / static_cast<double>(test_total);
  r.recall = static_cast<double>(matched) / static_cast<double>(gold_total);
  if (r.precision + r.recall > 0) {
    r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

namespace {

constexpr int kUnmapped = -1;

// Precomputed match structure between two triple sets. Mapping m sends a
// test variable to a gold variable or kUnmapped.
class MatchTable {
 public:
  MatchTable(const TripleSet &test, const TripleSet &gold)
      : na_(test.variables.size()), nb_(gold.variables.size()) {
    node_gain_.assign(na_ * nb_, 0);
    std::vector<std::string> gold_label(nb_);
    for (const auto &t : gold.instances) gold_label[t.var] = t.label;
    for (const auto &t : test.instances) {
      for (std::size_t j = 0; j < nb_; ++j) {
        if (gold_label[j] == t.label) ++node_gain_[t.var * nb_ + j];
      }
    }
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> gold_attr;
    for (const auto &t : gold.attributes) gold_attr[{t.role, t.value}].push_back(t.var);
    for (const auto &t : test.attributes) {
      auto it = gold_attr.find({t.role, t.value});
      if (it == gold_attr.end()) continue;
      for (std::size_t j : it->second) ++node_gain_[t.var * nb_ + j];
    }
    for (const auto &t : gold.relations) {
      gold_rel_.insert({t.source, t.role, t.target});
    }
    relations_ = test.relations;
    incident_.resize(na_);
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      incident_[relations_[r].source].push_back(r);
      incident_[relations_[r].target].push_back(r);
    }
  }

  std::size_t na() const { return na_; }
  std::size_t nb() const { return nb_; }

  int NodeGain(std::size_t i, int j) const {
    return j == kUnmapped ? 0 : node_gain_[i * nb_ + static_cast<std::size_t>(j)];
  }

  bool RelationMatched(std::size_t r, const std::vector<int> &m) const {
    const RelationTriple &t = relations_[r];
    int s = m[t.source];
    int d = m[t.target];
    if (s == kUnmapped || d == kUnmapped) return false;
    return gold_rel_.count({static_cast<std::size_t>(s), t.role,
                            static_cast<std::size_t>(d)}) > 0;
  }

  int Score(const std::vector<int> &m) const {
    int total = 0;
    for (std::size_t i = 0; i < na_; ++i) total += NodeGain(i, m[i]);
    for (std::size_t r = 0; r < relations_.size(); ++r) total += RelationMatched(r, m);
    return total;
  }

  // Score change when the variables in `changed` take new values in `next`.
  int Delta(const std::vector<int> &current, const std::vector<int> &next,
            std::initializer_list<std::size_t> changed) const {
    int delta = 0;
    std::vector<std::size_t> touched;
    for (std::size_t i : changed) {
      delta += NodeGain(i, next[i]) - NodeGain(i, current[i]);
      touched.insert(touched.end(), incident_[i].begin(), incident_[i].end());
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t r : touched) {
      delta += static_cast<int>(RelationMatched(r, next)) -
               static_cast<int>(RelationMatched(r, current));
    }
    return delta;
  }

  // Relations between i and variables already assigned (index < i).
  int GainWithEarlier(std::size_t i, const std::vector<int> &m) const {
    int gain = NodeGain(i, m[i]);
    for (std::size_t r : incident_[i]) {
      const RelationTriple &t = relations_[r];
      std::size_t other = t.source == i ? t.target : t.source;
      if (other < i && RelationMatched(r, m)) ++gain;
    }
    return gain;
  }

 private:
  std::size_t na_;
  std::size_t nb_;
  std::vector<int> node_gain_;
  std::set<std::tuple<std::size_t, std::string, std::size_t>> gold_rel_;
  std::vector<RelationTriple> relations_;
  std::vector<std::vector<std::size_t>> incident_;
};

// Steepest ascent over reassignments and swaps; ties keep the current map.
int HillClimb(const MatchTable &table, std::vector<int> &m) {
  const std::size_t na = table.na();
  const std::size_t nb = table.nb();
  int score = table.Score(m);
  while (true) {
    std::vector<bool> used(nb, false);
    for (int j : m) {
      if (j != kUnmapped) used[static_cast<std::size_t>(j)] = true;
    }
    int best_delta = 0;
    std::vector<int> best;
    std::vector<int> next = m;
    for (std::size_t i = 0; i < na; ++i) {
      for (int j = kUnmapped; j < static_cast<int>(nb); ++j) {
        if (j == m[i]) continue;
        if (j != kUnmapped && used[static_cast<std::size_t>(j)]) continue;
        next[i] = j;
        int d = table.Delta(m, next, {i});
        if (d > best_delta) {
          best_delta = d;
          best = next;
        }
        next[i] = m[i];
      }
    }
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t k = i + 1; k < na; ++k) {
        if (m[i] == m[k]) continue;
        std::swap(next[i], next[k]);
        int d = table.Delta(m, next, {i, k});
        if (d > best_delta) {
          best_delta = d;
          best = next;
        }
        std::swap(next[i], next[k]);
      }
    }
    if (best_delta <= 0) break;
    m = std::move(best);
    score += best_delta;
  }
  return score;
}

}  // namespace

SmatchResult Smatch(const AmrGraph &test, const AmrGraph &gold,
                    const SmatchOptions &options) {
  TripleSet a = ToTriples(test);
  TripleSet b = ToTriples(gold);
  if (a.size() == 0 || b.size() == 0) return ScoreFromCounts(0, a.size(), b.size());
  MatchTable table(a, b);
  const std::size_t na = table.na();
  const std::size_t nb = table.nb();

  // Label-matching start.
  std::vector<int> m(na, kUnmapped);
  {
    std::vector<bool> used(nb, false);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        if (!used[j] && a.instances[i].label == b.instances[j].label) {
          m[i] = static_cast<int>(j);
          used[j] = true;
          break;
        }
      }
    }
  }
  int best = HillClimb(table, m);

  std::mt19937_64 rng(options.seed);
  std::vector<int> perm(nb);
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> r(na, kUnmapped);
    for (std::size_t i = 0; i < na && i < nb; ++i) r[i] = perm[i];
    best = std::max(best, HillClimb(table, r));
  }
  return ScoreFromCounts(static_cast<std::size_t>(best), a.size(), b.size());
}

SmatchResult ExhaustiveSmatch(const AmrGraph &test, const AmrGraph &gold) {
  TripleSet a = ToTriples(test);
  TripleSet b = ToTriples(gold);
  if (a.size() == 0 || b.size() == 0) return ScoreFromCounts(0, a.size(), b.size());
  const bool flip = a.variables.size() > b.variables.size();
  const TripleSet &small = flip ? b : a;
  const TripleSet &large = flip ? a : b;
  const std::size_t n = small.variables.size();
  const std::size_t k = large.variables.size();
  if (n > 8) {
    throw Error(ErrorCode::kSize, "exhaustive smatch limited to 8 variables, got " +
                                      std::to_string(n));
  }
  double space = 1;
  for (std::size_t i = 0; i < n; ++i) space *= static_cast<double>(k - i);
  if (space > 5e7) {
    throw Error(ErrorCode::kSize, "exhaustive smatch search space too large");
  }
  // Matched-triple counts are symmetric, so enumerate injections of the
  // smaller variable set.
  MatchTable table(small, large);
  std::vector<int> m(n, kUnmapped);
  std::vector<bool> used(k, false);
  int best = 0;
  auto search = [&](auto &self, std::size_t i, int acc) -> void {
    if (i == n) {
      best = std::max(best, acc);
      return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      used[j] = true;
      m[i] = static_cast<int>(j);
      self(self, i + 1, acc + table.GainWithEarlier(i, m));
      m[i] = kUnmapped;
      used[j] = false;
    }
  };
  search(search, 0, 0);
  return ScoreFromCounts(static_cast<std::size_t>(best), a.size(), b.size());
}

}  // namespace amrkit
