#pragma once

// Line-delimited tweet records. Each line is a JSON object:
//   {"id": "...", "timestamp": "YYYY-MM-DDTHH:MM:SSZ", "text": "...", "label": -1|1}
// where label is optional for stream files and required for labeled training files.

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <ranges>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fiomon/civil_time.hpp"
#include "fiomon/error.hpp"

namespace fiomon {

struct TweetRecord {
  std::string id;
  Instant timestamp;
  std::string text;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

enum class Label : int { kIrrelevant = -1, kRelevant = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

struct LabeledExample {
  TweetRecord record;
  Label label;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

enum class Strictness { kStrict, kLenient };

struct Corpus {
  std::vector<TweetRecord> records;
  std::size_t rejected_count = 0;
};

struct LabeledSet {
  std::vector<LabeledExample> examples;
  std::size_t relevant = 0;
  std::size_t irrelevant = 0;
};

using RejectionSink = std::function<void(const ParseError&)>;

namespace detail {

inline bool is_blank(std::string_view s) {
  for (unsigned char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') return false;
  }
  return true;
}

inline const nlohmann::json& require_string(const nlohmann::json& obj, const char* field,
                                            std::size_t line_no) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(line_no, std::string("missing field '") + field + "'");
  if (!it->is_string()) throw ParseError(line_no, std::string("field '") + field + "' must be a string");
  return *it;
}

struct ParsedLine {
  TweetRecord record;
  std::optional<Label> label;
};

inline Label parse_label(const nlohmann::json& value, std::size_t line_no) {
  if (!value.is_number_integer()) throw ParseError(line_no, "label must be the integer -1 or 1");
  const auto v = value.get<long long>();
  if (v == 1) return Label::kRelevant;
  if (v == -1) return Label::kIrrelevant;
  throw ParseError(line_no, "label must be -1 or 1, got " + std::to_string(v));
}

inline ParsedLine parse_line(std::string_view line, std::size_t line_no, Strictness strictness) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed record: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line_no, "malformed record: not a JSON object");

  if (strictness == Strictness::kStrict) {
    for (const auto& [key, _] : obj.items()) {
      if (key != "id" && key != "timestamp" && key != "text" && key != "label") {
        throw ParseError(line_no, "unknown field '" + key + "'");
      }
    }
  }

  ParsedLine out;
  out.record.id = require_string(obj, "id", line_no).get<std::string>();
  if (out.record.id.empty()) throw ParseError(line_no, "empty id");

  const auto ts = require_string(obj, "timestamp", line_no).get<std::string>();
  const auto instant = parse_instant(ts);
  if (!instant) throw ParseError(line_no, "unparseable timestamp '" + ts + "'");
  out.record.timestamp = *instant;

  out.record.text = require_string(obj, "text", line_no).get<std::string>();
  if (is_blank(out.record.text)) throw ParseError(line_no, "empty text");

  if (const auto it = obj.find("label"); it != obj.end()) out.label = parse_label(*it, line_no);
  return out;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(std::string_view(line), line_no);
  }
}

}  // namespace detail

/// Parses one stream record. Throws ParseError carrying line_no and the reason.
inline TweetRecord parse_tweet_line(std::string_view line, std::size_t line_no = 0,
                                    Strictness strictness = Strictness::kLenient) {
  return detail::parse_line(line, line_no, strictness).record;
}

/// Inverse of parse_tweet_line: a single JSON line, no trailing newline.
inline std::string serialize_tweet(const TweetRecord& r) {
  nlohmann::ordered_json obj;
  obj["id"] = r.id;
  obj["timestamp"] = format_instant(r.timestamp);
  obj["text"] = r.text;
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

/// Incremental corpus assembly. Every line is one record; a blank line is malformed.
/// Strict mode throws on the first bad line; lenient mode reports it to the sink and
/// counts it. A duplicate id throws in both modes.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(Strictness strictness, RejectionSink on_reject = {})
      : strictness_(strictness), on_reject_(std::move(on_reject)) {}

  void add_line(std::string_view line, std::size_t line_no) {
    TweetRecord record;
    try {
      record = parse_tweet_line(line, line_no, strictness_);
    } catch (const ParseError& e) {
      if (strictness_ == Strictness::kStrict) throw;
      ++corpus_.rejected_count;
      if (on_reject_) on_reject_(e);
      return;
    }
    add(std::move(record), line_no);
  }

  void add(TweetRecord record, std::size_t line_no = 0) {
    if (!ids_.insert(record.id).second) {
      throw ParseError(line_no, "duplicate id '" + record.id + "'");
    }
    corpus_.records.push_back(std::move(record));
  }

  Corpus finish() && { return std::move(corpus_); }

 private:
  Strictness strictness_;
  RejectionSink on_reject_;
  Corpus corpus_;
  std::unordered_set<std::string> ids_;
};

template <std::ranges::input_range Lines>
Corpus load_corpus(const Lines& lines, Strictness strictness, RejectionSink on_reject = {}) {
  CorpusBuilder builder(strictness, std::move(on_reject));
  std::size_t line_no = 0;
  for (const auto& line : lines) builder.add_line(std::string_view(line), ++line_no);
  return std::move(builder).finish();
}

inline Corpus load_corpus(std::istream& in, Strictness strictness, RejectionSink on_reject = {}) {
  CorpusBuilder builder(strictness, std::move(on_reject));
  detail::for_each_line(in, [&](std::string_view line, std::size_t n) { builder.add_line(line, n); });
  return std::move(builder).finish();
}

namespace detail {

class LabeledSetBuilder {
 public:
  explicit LabeledSetBuilder(Strictness strictness) : strictness_(strictness) {}

  void add_line(std::string_view line, std::size_t line_no) {
    auto parsed = parse_line(line, line_no, strictness_);
    if (!parsed.label) throw ParseError(line_no, "missing field 'label'");
    if (!ids_.insert(parsed.record.id).second) {
      throw ParseError(line_no, "duplicate id '" + parsed.record.id + "'");
    }
    (*parsed.label == Label::kRelevant ? set_.relevant : set_.irrelevant) += 1;
    set_.examples.push_back({std::move(parsed.record), *parsed.label});
  }

  LabeledSet finish() && {
    if (set_.examples.empty()) throw TrainingDataError("labeled set is empty");
    return std::move(set_);
  }

 private:
  Strictness strictness_;
  LabeledSet set_;
  std::unordered_set<std::string> ids_;
};

}  // namespace detail

/// Training files are hand-curated, so every bad line is fatal regardless of strictness;
/// strictness only controls whether unknown fields are tolerated.
template <std::ranges::input_range Lines>
LabeledSet load_labeled_set(const Lines& lines, Strictness strictness = Strictness::kStrict) {
  detail::LabeledSetBuilder builder(strictness);
  std::size_t line_no = 0;
  for (const auto& line : lines) builder.add_line(std::string_view(line), ++line_no);
  return std::move(builder).finish();
}

inline LabeledSet load_labeled_set(std::istream& in, Strictness strictness = Strictness::kStrict) {
  detail::LabeledSetBuilder builder(strictness);
  detail::for_each_line(in, [&](std::string_view line, std::size_t n) { builder.add_line(line, n); });
  return std::move(builder).finish();
}

}  // namespace fiomon
