#include "amrkit/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "amrkit/error.h"
#include "amrkit/penman.h"
#include "amrkit/text.h"

namespace amrkit {

const std::string *Metadata::Find(const std::string &key) const {
  for (const auto &[k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Metadata::Get(const std::string &key, const std::string &fallback) const {
  const std::string *v = Find(key);
  return v ? *v : fallback;
}

void Metadata::Set(const std::string &key, std::string value) {
  for (auto &[k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

void Metadata::EraseFamily(const std::string &key) {
  std::erase_if(entries_, [&](const auto &entry) {
    return entry.first == key || entry.first.rfind(key + "-", 0) == 0;
  });
}

namespace {

// "# ::id x ::date y" -> {id: x, date: y}. `tok`, `snt`, `pos` and
// `alignments*` own the rest of their line.
void ParseCommentLine(std::string_view line, Metadata &meta) {
  std::size_t pos = line.find("::");
  while (pos != std::string_view::npos) {
    std::string_view rest = line.substr(pos + 2);
    std::size_t space = std::min(rest.find_first_of(" \t"), rest.size());
    std::string key(rest.substr(0, space));
    bool owns_line = key == "tok" || key == "snt" || key == "pos" ||
                     key.rfind("alignments", 0) == 0;
    std::size_t next = owns_line ? std::string_view::npos : rest.find(" ::");
    std::size_t end = std::min(next, rest.size());
    std::string value(Trim(rest.substr(space, end > space ? end - space : 0)));
    if (!key.empty()) meta.Set(key, value);
    pos = next == std::string_view::npos ? next : pos + 2 + next + 1;
  }
}

}  // namespace

std::vector<Block> ReadBlocks(std::istream &in) {
  std::vector<Block> blocks;
  Block current;
  bool open = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = Trim(raw);
    if (line.empty()) {
      if (open) blocks.push_back(std::move(current));
      current = Block{};
      open = false;
      continue;
    }
    if (!open) {
      current.first_line = line_no;
      open = true;
    }
    if (line.front() == '#') {
      ParseCommentLine(line, current.meta);
    } else {
      current.body.emplace_back(raw);
    }
  }
  if (open) blocks.push_back(std::move(current));
  return blocks;
}

std::vector<Block> ReadBlocksFromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ReadBlocks(in);
}

void WriteBlock(std::ostream &out, const Metadata &meta,
                const std::vector<std::string> &body) {
  for (const auto &[key, value] : meta.entries()) {
    out << "# ::" << key;
    if (!value.empty()) out << ' ' << value;
    out << '\n';
  }
  for (const std::string &line : body) out << line << '\n';
  out << '\n';
}

CorpusDocument ToDocument(const Block &block, bool parse_body) {
  CorpusDocument doc;
  doc.meta = block.meta;
  doc.id = block.meta.Get("id", "line-" + std::to_string(block.first_line));
  if (const std::string *tok = block.meta.Find("tok")) {
    doc.tokens = SplitWhitespace(*tok);
  } else if (const std::string *snt = block.meta.Find("snt")) {
    doc.tokens = SplitWhitespace(*snt);
  }
  if (const std::string *pos = block.meta.Find("pos")) {
    doc.pos = SplitWhitespace(*pos);
    if (doc.pos.size() != doc.tokens.size()) {
      throw Error(ErrorCode::kInput, doc.id + ": " + std::to_string(doc.tokens.size()) +
                                         " tokens but " + std::to_string(doc.pos.size()) +
                                         " POS tags");
    }
  }
  if (parse_body && !block.body.empty()) {
    std::string text;
    for (const std::string &line : block.body) text += line + "\n";
    doc.graph = ParsePenman(text);
  }
  return doc;
}

std::vector<Block> SentenceBlocks(std::vector<Block> blocks) {
  std::erase_if(blocks, [](const Block &b) {
    return b.body.empty() && !b.meta.Find("tok") && !b.meta.Find("snt");
  });
  return blocks;
}

std::vector<CorpusDocument> ReadCorpusFile(const std::string &path) {
  std::vector<CorpusDocument> docs;
  for (const Block &b : SentenceBlocks(ReadBlocksFromFile(path))) docs.push_back(ToDocument(b));
  return docs;
}

}  // namespace amrkit
