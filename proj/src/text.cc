#include "amrkit/text.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <utility>

namespace amrkit {

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

bool HasSenseSuffix(std::string_view label) {
  std::size_t dash = label.rfind('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == label.size()) {
    return false;
  }
  for (std::size_t i = dash + 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return false;
  }
  return true;
}

std::string StripSense(std::string_view label) {
  if (!HasSenseSuffix(label)) return std::string(label);
  return std::string(label.substr(0, label.rfind('-')));
}

std::size_t CommonPrefixLength(std::string_view a, std::string_view b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

namespace {

constexpr std::array<std::pair<std::string_view, long>, 28> kNumberWords = {{
    {"zero", 0},       {"one", 1},         {"two", 2},
    {"three", 3},      {"four", 4},        {"five", 5},
    {"six", 6},        {"seven", 7},       {"eight", 8},
    {"nine", 9},       {"ten", 10},        {"eleven", 11},
    {"twelve", 12},    {"thirteen", 13},   {"fourteen", 14},
    {"fifteen", 15},   {"sixteen", 16},    {"seventeen", 17},
    {"eighteen", 18},  {"nineteen", 19},   {"twenty", 20},
    {"thirty", 30},    {"forty", 40},      {"fifty", 50},
    {"hundred", 100},  {"thousand", 1000}, {"million", 1000000},
    {"dozen", 12},
}};

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

}  // namespace

std::optional<long> TokenNumber(std::string_view token) {
  if (token.empty()) return std::nullopt;
  std::string cleaned;
  for (char c : token) {
    if (c != ',') cleaned.push_back(c);
  }
  long value = 0;
  auto [ptr, ec] =
      std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), value);
  if (ec == std::errc() && ptr == cleaned.data() + cleaned.size()) {
    return value;
  }
  std::string lower = Lowercase(token);
  for (const auto &[word, number] : kNumberWords) {
    if (word == lower) return number;
  }
  return std::nullopt;
}

std::optional<std::string> CanonicalNumber(std::string_view token) {
  if (token.empty()) return std::nullopt;
  double value = 0;
  std::string s(token);
  if (s.front() == '+') s.erase(s.begin());
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  long integral = static_cast<long>(value);
  if (static_cast<double>(integral) == value) return std::to_string(integral);
  std::string out(token);
  return out;
}

std::optional<int> MonthNumber(std::string_view token) {
  std::string lower = Lowercase(token);
  if (!lower.empty() && lower.back() == '.') lower.pop_back();
  if (lower.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == lower) return static_cast<int>(i) + 1;
    // Abbreviations: "jan", "sept", ...
    if (lower.size() <= 4 && kMonths[i].substr(0, lower.size()) == lower) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

bool IsNegationWord(std::string_view token) {
  std::string lower = Lowercase(token);
  return lower == "no" || lower == "not" || lower == "never" ||
         lower == "n't" || lower == "none" || lower == "nothing" ||
         lower == "neither" || lower == "nor";
}

}  // namespace amrkit
