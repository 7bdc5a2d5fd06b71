#pragma once

// Deterministic synthetic tweet data for demos and tests. No real tweets ship with the
// project; these generators produce corpora with known structure instead.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fiomon/civil_time.hpp"
#include "fiomon/corpus.hpp"
#include "fiomon/timeline.hpp"

namespace fiomon::synthetic {

namespace detail {

inline constexpr std::array<std::string_view, 16> kOutbreakWords = {
    "salmonella", "poona", "cucumbers", "recall", "outbreak", "cdc", "illness", "infected",
    "contaminated", "produce", "mexico", "sick", "hospitalized", "investigation", "slicer", "health"};

inline constexpr std::array<std::string_view, 16> kChatterWords = {
    "tacos", "concert", "football", "weekend", "movie", "guitar", "coffee", "sunset",
    "playlist", "traffic", "homework", "birthday", "pizza", "sneakers", "podcast", "vacation"};

inline constexpr std::array<std::string_view, 8> kFillerWords = {
    "just", "today", "really", "everyone", "people", "news", "think", "lol"};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  template <std::size_t N>
  std::string_view pick(const std::array<std::string_view, N>& words) {
    return words[below(N)];
  }

  template <std::size_t N>
  std::string sentence(const std::array<std::string_view, N>& topic, std::size_t topic_words,
                       std::size_t filler_words) {
    std::vector<std::string_view> words;
    for (std::size_t i = 0; i < topic_words; ++i) words.push_back(pick(topic));
    for (std::size_t i = 0; i < filler_words; ++i) words.push_back(pick(kFillerWords));
    for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[below(i)]);
    std::string out;
    for (const auto w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  }

  Instant instant_in(Instant begin, Instant end) {
    const auto span = static_cast<std::uint64_t>((end - begin).count());
    return begin + std::chrono::seconds{static_cast<long long>(rng_() % span)};
  }

 private:
  std::mt19937_64 rng_;
};

inline std::string make_id(std::string_view prefix, std::size_t i) { return std::string(prefix) + std::to_string(i); }

}  // namespace detail

/// Linearly separable training set: relevant texts draw from outbreak vocabulary, the
/// others from unrelated chatter; both share filler words.
inline LabeledSet labeled_set(std::size_t relevant, std::size_t irrelevant, std::uint64_t seed = 7) {
  detail::Generator gen(seed);
  LabeledSet set;
  const Instant base = start_of(parse_date("2015-09-01").value());
  std::size_t relevant_left = relevant;
  std::size_t irrelevant_left = irrelevant;
  for (std::size_t i = 0; i < relevant + irrelevant; ++i) {
    const bool rel = relevant_left > 0 && (irrelevant_left == 0 || i % 2 == 0);
    (rel ? relevant_left : irrelevant_left) -= 1;
    LabeledExample ex;
    ex.record.id = detail::make_id("train-", i);
    ex.record.timestamp = base + std::chrono::minutes{i};
    ex.record.text = rel ? gen.sentence(detail::kOutbreakWords, 3 + gen.below(4), 1 + gen.below(3))
                         : gen.sentence(detail::kChatterWords, 3 + gen.below(4), 1 + gen.below(3));
    ex.label = rel ? Label::kRelevant : Label::kIrrelevant;
    (rel ? set.relevant : set.irrelevant) += 1;
    set.examples.push_back(std::move(ex));
  }
  return set;
}

inline std::string serialize_labeled(const LabeledExample& ex) {
  auto line = serialize_tweet(ex.record);
  line.pop_back();  // closing brace
  line += ",\"label\":" + std::to_string(to_int(ex.label)) + "}";
  return line;
}

/// Raw stream over [begin, end): roughly a third on-topic and keyword-bearing, a third
/// keyword-bearing chatter ("salmonella" used off-topic), a third without keywords.
inline std::vector<TweetRecord> stream(std::size_t count, Instant begin, Instant end, std::uint64_t seed = 11) {
  detail::Generator gen(seed);
  std::vector<TweetRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    TweetRecord r;
    r.id = detail::make_id("s-", i);
    r.timestamp = gen.instant_in(begin, end);
    switch (gen.below(3)) {
      case 0:
        r.text = "Salmonella " + gen.sentence(detail::kOutbreakWords, 3 + gen.below(3), gen.below(3));
        break;
      case 1:
        r.text = gen.sentence(detail::kChatterWords, 4 + gen.below(3), gen.below(2)) + " salmonella";
        break;
      default:
        r.text = gen.sentence(detail::kChatterWords, 3 + gen.below(4), 1 + gen.below(3));
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Relevant-tweet counts per period of the built-in timeline as reported for the
/// 2015 outbreak: pre-period first, final period capped at 2016-03-31.
inline constexpr std::array<std::size_t, 11> kReportedPeriodCounts = {
    442, 18006, 9425, 1531, 4130, 533, 2047, 639, 1359, 1582, 349};

inline constexpr std::string_view kReportedFirstDay = "2015-07-01";
inline constexpr std::string_view kReportedLastDay = "2016-03-31";

/// Tweets with timestamps spread uniformly inside each period of `timeline` so that the
/// per-period counts equal `counts`. The pre-period starts at first_day, the last period
/// ends after last_day.
inline std::vector<TweetRecord> replay_period_counts(const EventTimeline& timeline,
                                                     std::span<const std::size_t> counts, Date first_day,
                                                     Date last_day, std::uint64_t seed = 3) {
  detail::Generator gen(seed);
  std::vector<TweetRecord> out;
  const auto periods = timeline.period_count();
  std::size_t id = 0;
  for (std::size_t row = 0; row <= periods && row < counts.size(); ++row) {
    const Instant begin = start_of(row == 0 ? first_day : timeline.boundary_date(row - 1));
    const Instant end = start_of(row == periods ? last_day + std::chrono::days{1} : timeline.boundary_date(row));
    for (std::size_t i = 0; i < counts[row]; ++i) {
      TweetRecord r;
      r.id = detail::make_id("r-", id++);
      r.timestamp = gen.instant_in(begin, end);
      r.text = "salmonella " + gen.sentence(detail::kOutbreakWords, 3, 1);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace fiomon::synthetic
