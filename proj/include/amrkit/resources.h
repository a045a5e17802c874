#ifndef AMRKIT_RESOURCES_H_
#define AMRKIT_RESOURCES_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace amrkit {

// Word vectors in GloVe text layout, keyed by lowercase word.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  // Throws a format error on dimension mismatch or non-finite entries.
  void Add(const std::string &word, std::vector<double> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double> *Find(std::string_view word) const;

  bool operator==(const EmbeddingTable &other) const = default;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Derivational (word-form, concept-base) pairs from the morphosemantic
// database, reduced to two-column TSV.
class MorphLinkTable {
 public:
  void Add(const std::string &form, const std::string &base);
  bool Contains(const std::string &form, const std::string &base) const;
  std::size_t size() const { return links_.size(); }
  std::size_t skipped_lines() const { return skipped_; }
  void set_skipped_lines(std::size_t n) { skipped_ = n; }

  bool operator==(const MorphLinkTable &other) const { return links_ == other.links_; }

 private:
  std::set<std::pair<std::string, std::string>> links_;
  std::size_t skipped_ = 0;
};

class LemmaTable {
 public:
  void Add(const std::string &form, const std::string &lemma);
  // Lemmas of `form` (lowercased), always including the form itself.
  std::set<std::string> Lookup(std::string_view form) const;
  // The first listed lemma, or the lowercased form.
  std::string Primary(std::string_view form) const;
  std::size_t size() const { return lemmas_.size(); }
  std::size_t skipped_lines() const { return skipped_; }
  void set_skipped_lines(std::size_t n) { skipped_ = n; }

  bool operator==(const LemmaTable &other) const { return lemmas_ == other.lemmas_; }

 private:
  std::map<std::string, std::vector<std::string>> lemmas_;
  std::size_t skipped_ = 0;
};

EmbeddingTable LoadEmbeddings(const std::string &path);
MorphLinkTable LoadMorphosemantic(const std::string &path);
LemmaTable LoadLemmas(const std::string &path);

// Absent when either word is missing or has a zero vector.
std::optional<double> Cosine(const EmbeddingTable &t, std::string_view w1,
                             std::string_view w2);

inline constexpr double kDefaultCosineThreshold = 0.7;

// Sense-stripped, lowercased concept label vs. lowercased word; strictly
// greater than the threshold.
bool SemanticMatch(const EmbeddingTable &t, std::string_view concept_label,
                   std::string_view word, double threshold = kDefaultCosineThreshold);

bool MorphMatch(const MorphLinkTable &links, const LemmaTable &lemmas,
                std::string_view concept_label, std::string_view word);

}  // namespace amrkit

#endif  // AMRKIT_RESOURCES_H_
