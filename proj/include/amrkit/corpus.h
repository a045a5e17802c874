#ifndef AMRKIT_CORPUS_H_
#define AMRKIT_CORPUS_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amrkit/graph.h"

namespace amrkit {

// Ordered `# ::key value` header lines.
class Metadata {
 public:
  const std::string *Find(const std::string &key) const;
  std::string Get(const std::string &key, const std::string &fallback = "") const;
  void Set(const std::string &key, std::string value);
  // Removes keys equal to `key` or starting with `key` + "-".
  void EraseFamily(const std::string &key);

  const std::vector<std::pair<std::string, std::string>> &entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// A blank-line separated chunk of a corpus file.
struct Block {
  Metadata meta;
  std::vector<std::string> body;  // non-comment lines
  std::size_t first_line = 0;     // 1-based line number, for messages
};

std::vector<Block> ReadBlocks(std::istream &in);
std::vector<Block> ReadBlocksFromFile(const std::string &path);
void WriteBlock(std::ostream &out, const Metadata &meta,
                const std::vector<std::string> &body);

struct CorpusDocument {
  std::string id;
  Metadata meta;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;  // empty when not provided
  std::optional<AmrGraph> graph;
};

// Tokens come from `# ::tok` (or whitespace-split `# ::snt`); POS from
// `# ::pos`. Throws an input error on token/POS arity mismatch. The body is
// read as Penman unless `parse_body` is false.
CorpusDocument ToDocument(const Block &block, bool parse_body = true);
// Drops comment-only blocks such as file preambles.
std::vector<Block> SentenceBlocks(std::vector<Block> blocks);
std::vector<CorpusDocument> ReadCorpusFile(const std::string &path);

}  // namespace amrkit

#endif  // AMRKIT_CORPUS_H_
