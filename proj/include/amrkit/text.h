#ifndef AMRKIT_TEXT_H_
#define AMRKIT_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amrkit {

std::string Lowercase(std::string_view s);
std::string_view Trim(std::string_view s);
std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// `run-01` -> `run`. Labels without a numeric sense suffix are unchanged.
std::string StripSense(std::string_view label);
bool HasSenseSuffix(std::string_view label);

// Length of the common prefix of two strings.
std::size_t CommonPrefixLength(std::string_view a, std::string_view b);

// Integer value of a digit string or an English number word ("two" -> 2).
std::optional<long> TokenNumber(std::string_view token);

// Canonical text of a numeric literal ("2.0" -> "2", "007" -> "7");
// nullopt for non-numbers.
std::optional<std::string> CanonicalNumber(std::string_view token);

// Month number for "may", "May", "Sept." and so on.
std::optional<int> MonthNumber(std::string_view token);

bool IsNegationWord(std::string_view token);

}  // namespace amrkit

#endif  // AMRKIT_TEXT_H_
