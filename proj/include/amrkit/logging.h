#ifndef AMRKIT_LOGGING_H_
#define AMRKIT_LOGGING_H_

#include <string_view>

namespace amrkit {

// Warnings go to stderr unless silenced (tests silence them).
void Warn(std::string_view message);
void SetWarningsEnabled(bool enabled);

}  // namespace amrkit

#endif  // AMRKIT_LOGGING_H_
