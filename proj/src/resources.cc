#include "amrkit/resources.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "amrkit/error.h"
#include "amrkit/logging.h"
#include "amrkit/text.h"

namespace amrkit {

void EmbeddingTable::Add(const std::string &word, std::vector<double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kFormat, "vector for '" + word + "' has dimension " +
                                        std::to_string(vector.size()) + ", expected " +
                                        std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kFormat, "non-finite entry in vector for '" + word + "'");
    }
  }
  vectors_.try_emplace(Lowercase(word), std::move(vector));
}

const std::vector<double> *EmbeddingTable::Find(std::string_view word) const {
  auto it = vectors_.find(Lowercase(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

void MorphLinkTable::Add(const std::string &form, const std::string &base) {
  links_.emplace(Lowercase(form), Lowercase(base));
}

bool MorphLinkTable::Contains(const std::string &form, const std::string &base) const {
  return links_.count({form, base}) > 0;
}

void LemmaTable::Add(const std::string &form, const std::string &lemma) {
  auto &list = lemmas_[Lowercase(form)];
  std::string l = Lowercase(lemma);
  if (std::find(list.begin(), list.end(), l) == list.end()) list.push_back(l);
}

std::set<std::string> LemmaTable::Lookup(std::string_view form) const {
  std::string lower = Lowercase(form);
  std::set<std::string> out{lower};
  auto it = lemmas_.find(lower);
  if (it != lemmas_.end()) out.insert(it->second.begin(), it->second.end());
  return out;
}

std::string LemmaTable::Primary(std::string_view form) const {
  std::string lower = Lowercase(form);
  auto it = lemmas_.find(lower);
  if (it == lemmas_.end() || it->second.empty()) return lower;
  return it->second.front();
}

namespace {

std::ifstream OpenOrThrow(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return in;
}

// Calls `fn(form, value)` for each well-formed TSV line; returns the number
// of malformed lines skipped.
template <typename Fn>
std::size_t ReadTwoColumns(const std::string &path, Fn fn) {
  std::ifstream in = OpenOrThrow(path);
  std::string line;
  std::size_t skipped = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::size_t tab = view.find('\t');
    if (tab == std::string_view::npos) {
      ++skipped;
      continue;
    }
    std::string form(Trim(view.substr(0, tab)));
    std::string value(Trim(view.substr(tab + 1)));
    if (form.empty() || value.empty()) {
      ++skipped;
      continue;
    }
    fn(form, value);
  }
  if (skipped > 0) {
    Warn(path + ": skipped " + std::to_string(skipped) + " malformed line(s)");
  }
  return skipped;
}

}  // namespace

EmbeddingTable LoadEmbeddings(const std::string &path) {
  std::ifstream in = OpenOrThrow(path);
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string &f = fields[i];
      double v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::kFormat, path + ":" + std::to_string(line_no) +
                                            ": cannot parse number '" + f + "'");
      }
      vec.push_back(v);
    }
    if (vec.empty()) {
      throw Error(ErrorCode::kFormat,
                  path + ":" + std::to_string(line_no) + ": word without a vector");
    }
    if (table.dimension() != 0 && vec.size() != table.dimension()) {
      throw Error(ErrorCode::kFormat, path + ":" + std::to_string(line_no) +
                                          ": dimension " + std::to_string(vec.size()) +
                                          ", expected " +
                                          std::to_string(table.dimension()));
    }
    try {
      table.Add(fields[0], std::move(vec));
    } catch (const Error &e) {
      throw Error(ErrorCode::kFormat,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

MorphLinkTable LoadMorphosemantic(const std::string &path) {
  MorphLinkTable table;
  std::size_t skipped = ReadTwoColumns(path, [&](const std::string &form,
                                                 const std::string &base) {
    table.Add(form, base);
  });
  table.set_skipped_lines(skipped);
  return table;
}

LemmaTable LoadLemmas(const std::string &path) {
  LemmaTable table;
  std::size_t skipped = ReadTwoColumns(path, [&](const std::string &form,
                                                 const std::string &lemmas) {
    for (const std::string &l : Split(lemmas, ',')) {
      std::string_view t = Trim(l);
      if (!t.empty()) table.Add(form, std::string(t));
    }
  });
  table.set_skipped_lines(skipped);
  return table;
}

std::optional<double> Cosine(const EmbeddingTable &t, std::string_view w1,
                             std::string_view w2) {
  const std::vector<double> *a = t.Find(w1);
  const std::vector<double> *b = t.Find(w2);
  if (!a || !b) return std::nullopt;
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a->size(); ++i) {
    dot += (*a)[i] * (*b)[i];
    na += (*a)[i] * (*a)[i];
    nb += (*b)[i] * (*b)[i];
  }
  if (na == 0 || nb == 0) return std::nullopt;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool SemanticMatch(const EmbeddingTable &t, std::string_view concept_label,
                   std::string_view word, double threshold) {
  std::optional<double> c = Cosine(t, Lowercase(StripSense(concept_label)), word);
  return c.has_value() && *c > threshold;
}

bool MorphMatch(const MorphLinkTable &links, const LemmaTable &lemmas,
                std::string_view concept_label, std::string_view word) {
  std::string base = Lowercase(StripSense(concept_label));
  for (const std::string &form : lemmas.Lookup(word)) {
    if (form == base || links.Contains(form, base)) return true;
  }
  return false;
}

}  // namespace amrkit
