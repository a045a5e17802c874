#ifndef AMRKIT_ERROR_H_
#define AMRKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace amrkit {

// Error categories. The CLI prints them as a machine-parsable prefix
// (`error[E_SYNTAX]: ...`).
enum class ErrorCode {
  kUsage,
  kIo,
  kSyntax,
  kStructure,
  kSerialization,
  kLookup,
  kFormat,
  kInput,
  kSize,
  kTransition,
  kState,
  kOracle,
  kPrune,
  kStats,
  kTraining,
  kDecode,
  kModel,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Penman syntax errors carry the byte offset of the offending character.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &message, std::size_t position)
      : Error(ErrorCode::kSyntax,
              message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace amrkit

#endif  // AMRKIT_ERROR_H_
