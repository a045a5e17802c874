#ifndef AMRKIT_TESTS_TEST_SUPPORT_H_
#define AMRKIT_TESTS_TEST_SUPPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "amrkit/corpus.h"
#include "amrkit/error.h"

namespace amrkit::testing {

inline std::string Fixture(const std::string &name) {
  return std::string(AMRKIT_SOURCE_DIR) + "/tests/fixtures/" + name;
}

inline const CorpusDocument &FixtureDoc(const std::string &id) {
  static const std::vector<CorpusDocument> docs = ReadCorpusFile(Fixture("corpus.amr"));
  for (const CorpusDocument &d : docs) {
    if (d.id == id) return d;
  }
  throw Error(ErrorCode::kLookup, "no fixture " + id);
}

// Code of the amrkit::Error thrown by `fn`, if any.
template <class Fn>
std::optional<ErrorCode> CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace amrkit::testing

#endif  // AMRKIT_TESTS_TEST_SUPPORT_H_
