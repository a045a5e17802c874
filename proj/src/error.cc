#include "amrkit/error.h"

#include <atomic>
#include <iostream>
#include <mutex>

#include "amrkit/logging.h"

namespace amrkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "E_USAGE";
    case ErrorCode::kIo: return "E_IO";
    case ErrorCode::kSyntax: return "E_SYNTAX";
    case ErrorCode::kStructure: return "E_STRUCTURE";
    case ErrorCode::kSerialization: return "E_SERIALIZE";
    case ErrorCode::kLookup: return "E_LOOKUP";
    case ErrorCode::kFormat: return "E_FORMAT";
    case ErrorCode::kInput: return "E_INPUT";
    case ErrorCode::kSize: return "E_SIZE";
    case ErrorCode::kTransition: return "E_TRANSITION";
    case ErrorCode::kState: return "E_STATE";
    case ErrorCode::kOracle: return "E_ORACLE";
    case ErrorCode::kPrune: return "E_PRUNE";
    case ErrorCode::kStats: return "E_STATS";
    case ErrorCode::kTraining: return "E_TRAIN";
    case ErrorCode::kDecode: return "E_DECODE";
    case ErrorCode::kModel: return "E_MODEL";
  }
  return "E_UNKNOWN";
}

namespace {
std::atomic<bool> warnings_enabled{true};
std::mutex warn_mutex;
}  // namespace

void Warn(std::string_view message) {
  if (!warnings_enabled.load()) return;
  std::lock_guard<std::mutex> lock(warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void SetWarningsEnabled(bool enabled) { warnings_enabled.store(enabled); }

}  // namespace amrkit
