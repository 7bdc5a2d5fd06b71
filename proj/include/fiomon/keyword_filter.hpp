#pragma once

// Stage-one noise reduction: keep a tweet when any configured phrase occurs in it
// as whole words after normalization.

#include <cctype>
#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fiomon/corpus.hpp"
#include "fiomon/error.hpp"

namespace fiomon {

/// Lowercases ASCII letters, turns every ASCII punctuation character except '&' into a
/// space, collapses whitespace runs and trims. Bytes outside ASCII pass through.
inline std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool separator =
        c < 0x80 && (std::isspace(c) || std::iscntrl(c) || (std::ispunct(c) && c != '&'));
    if (separator) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
  return out;
}

class KeywordSet {
 public:
  /// Throws std::invalid_argument when the set is empty or a phrase normalizes to nothing.
  explicit KeywordSet(std::vector<std::string> phrases) : phrases_(std::move(phrases)) {
    if (phrases_.empty()) throw std::invalid_argument("keyword set needs at least one phrase");
    normalized_.reserve(phrases_.size());
    for (const auto& p : phrases_) {
      auto n = normalize_text(p);
      if (n.empty()) throw std::invalid_argument("keyword phrase '" + p + "' is empty after normalization");
      normalized_.push_back(std::move(n));
    }
  }

  const std::vector<std::string>& phrases() const noexcept { return phrases_; }
  const std::vector<std::string>& normalized() const noexcept { return normalized_; }
  std::size_t size() const noexcept { return phrases_.size(); }

 private:
  std::vector<std::string> phrases_;
  std::vector<std::string> normalized_;
};

inline KeywordSet default_keywords() {
  return KeywordSet({
      "Salmonella",
      "Salmonella Poona",
      "Salmonella Tainted",
      "Contaminated Cucumbers",
      "Andrew & Williamson Fresh Produce",
      "Fat Boy Brand",
      "Mexican Cucumbers",
  });
}

/// One phrase per line; '#' comment lines and blank lines are skipped.
inline KeywordSet load_keywords(std::istream& in) {
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    phrases.push_back(line.substr(first, last - first + 1));
  }
  try {
    return KeywordSet(std::move(phrases));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("keyword file: ") + e.what());
  }
}

inline std::string format_keywords(const KeywordSet& keywords) {
  std::string out = "# one phrase per line; matching is case-insensitive on whole words\n";
  for (const auto& p : keywords.phrases()) out += p + "\n";
  return out;
}

namespace detail {

// Padding both sides with a space turns whole-word alignment into a plain substring test,
// since normalized text has exactly one space between words.
inline bool contains_phrase(const std::string& padded_text, const std::string& phrase) {
  std::string needle;
  needle.reserve(phrase.size() + 2);
  needle.push_back(' ');
  needle += phrase;
  needle.push_back(' ');
  return padded_text.find(needle) != std::string::npos;
}

}  // namespace detail

inline bool matches(const KeywordSet& keywords, std::string_view text) {
  const std::string padded = " " + normalize_text(text) + " ";
  for (const auto& phrase : keywords.normalized()) {
    if (detail::contains_phrase(padded, phrase)) return true;
  }
  return false;
}

struct FilterResult {
  Corpus corpus;
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

inline FilterResult filter_corpus(const Corpus& corpus, const KeywordSet& keywords) {
  FilterResult result;
  result.corpus.rejected_count = corpus.rejected_count;
  for (const auto& record : corpus.records) {
    if (matches(keywords, record.text)) {
      result.corpus.records.push_back(record);
    }
  }
  result.kept = result.corpus.records.size();
  result.dropped = corpus.records.size() - result.kept;
  return result;
}

}  // namespace fiomon
