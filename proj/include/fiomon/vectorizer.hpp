#pragma once

// Unigram tf-idf vectors.
//
//   tf(j, i)     = 1/2 + 1/2 * f(j, i) / max_k f(k, i)     over words k of tweet i
//   idf(j, D)    = ln(N / df(j))                           df(j) = #docs of D containing j
//   tfidf(j, i)  = tf(j, i) * idf(j, D)
//
// Only terms that occur in a tweet get an entry; zero products are not stored.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fiomon {

/// Tokenization policy. Stored in the model file so that prediction tokenizes exactly as
/// fitting did.
struct TokenRules {
  static constexpr std::string_view kScheme = "alnum";

  std::size_t min_length = 2;  // in code points
  bool drop_numeric = true;

  friend bool operator==(const TokenRules&, const TokenRules&) = default;
};

namespace detail {

inline bool is_token_byte(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

inline bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Lowercases ASCII and splits on every ASCII character that is not a letter or digit.
/// Non-ASCII bytes are kept inside tokens so UTF-8 words survive intact.
inline std::vector<std::string> tokenize(std::string_view text, const TokenRules& rules = {}) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && detail::code_points(current) >= rules.min_length &&
        !(rules.drop_numeric && detail::all_digits(current))) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (!detail::is_token_byte(c)) {
      flush();
      continue;
    }
    current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
  }
  flush();
  return tokens;
}

struct SparseEntry {
  std::uint32_t index;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Entries sorted by strictly increasing index, no stored zeros.
struct SparseVector {
  std::vector<SparseEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }

  /// Builds a vector from unordered (index, value) pairs; drops zeros, rejects duplicates.
  static SparseVector from_pairs(std::vector<SparseEntry> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    SparseVector v;
    v.entries.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i > 0 && pairs[i].index == pairs[i - 1].index) {
        throw std::invalid_argument("duplicate sparse index " + std::to_string(pairs[i].index));
      }
      if (pairs[i].value != 0.0) v.entries.push_back(pairs[i]);
    }
    return v;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

using TermCounts = std::unordered_map<std::string, std::size_t>;

inline TermCounts count_terms(const std::vector<std::string>& tokens) {
  TermCounts counts;
  for (const auto& t : tokens) ++counts[t];
  return counts;
}

/// Double-normalized term frequency, in (1/2, 1]. The term must occur in the tweet.
inline double term_frequency(const TermCounts& counts, std::string_view term) {
  const auto it = counts.find(std::string(term));
  if (it == counts.end() || it->second == 0) {
    throw std::invalid_argument("term_frequency: '" + std::string(term) + "' does not occur in the tweet");
  }
  std::size_t max_count = 0;
  for (const auto& [_, c] : counts) max_count = std::max(max_count, c);
  return 0.5 + 0.5 * static_cast<double>(it->second) / static_cast<double>(max_count);
}

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Rebuilds a vocabulary from persisted parts; validates every invariant.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_frequency,
             std::size_t corpus_size)
      : terms_(std::move(terms)), doc_frequency_(std::move(doc_frequency)), corpus_size_(corpus_size) {
    if (corpus_size_ == 0) throw std::invalid_argument("vocabulary corpus size must be at least 1");
    if (terms_.size() != doc_frequency_.size()) {
      throw std::invalid_argument("vocabulary terms and document frequencies differ in length");
    }
    index_.reserve(terms_.size());
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      if (terms_[j].empty()) throw std::invalid_argument("vocabulary contains an empty term");
      if (doc_frequency_[j] < 1 || doc_frequency_[j] > corpus_size_) {
        throw std::invalid_argument("document frequency of '" + terms_[j] + "' outside [1, N]");
      }
      if (!index_.emplace(terms_[j], static_cast<std::uint32_t>(j)).second) {
        throw std::invalid_argument("duplicate vocabulary term '" + terms_[j] + "'");
      }
    }
  }

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& doc_frequencies() const noexcept { return doc_frequency_; }

  std::optional<std::uint32_t> index_of(std::string_view term) const {
    const auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t doc_frequency(std::string_view term) const {
    const auto j = index_of(term);
    if (!j) throw std::out_of_range("term '" + std::string(term) + "' is not in the vocabulary");
    return doc_frequency_[*j];
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.doc_frequency_ == b.doc_frequency_ &&
           a.corpus_size_ == b.corpus_size_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_frequency_;
  std::size_t corpus_size_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Terms are indexed in first-seen order. Throws std::invalid_argument on an empty
/// training set or when every document is empty.
template <typename Docs>
Vocabulary build_vocabulary(const Docs& docs) {
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t n_docs = 0;
  bool any_token = false;
  for (const auto& doc : docs) {
    ++n_docs;
    std::vector<std::size_t> seen;
    for (const auto& token : doc) {
      any_token = true;
      auto [it, inserted] = index.emplace(token, terms.size());
      if (inserted) {
        terms.push_back(token);
        df.push_back(0);
      }
      seen.push_back(it->second);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto j : seen) ++df[j];
  }
  if (n_docs == 0) throw std::invalid_argument("cannot build a vocabulary from an empty training set");
  if (!any_token) throw std::invalid_argument("every training document is empty after tokenization");
  return Vocabulary(std::move(terms), std::move(df), n_docs);
}

/// Natural-log idf of a vocabulary term; throws std::out_of_range for unknown terms.
inline double inverse_document_frequency(const Vocabulary& vocab, std::string_view term) {
  const auto df = vocab.doc_frequency(term);
  return std::log(static_cast<double>(vocab.corpus_size()) / static_cast<double>(df));
}

class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(Vocabulary vocabulary, TokenRules rules)
      : vocabulary_(std::move(vocabulary)), rules_(rules) {
    idf_.reserve(vocabulary_.size());
    const auto n = static_cast<double>(vocabulary_.corpus_size());
    for (const auto df : vocabulary_.doc_frequencies()) {
      idf_.push_back(std::log(n / static_cast<double>(df)));
    }
  }

  /// Tokenizes every training text with `rules` and builds the vocabulary from them.
  template <typename Texts>
  static TfIdfModel fit(const Texts& texts, TokenRules rules = {}) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& t : texts) docs.push_back(tokenize(t, rules));
    return TfIdfModel(build_vocabulary(docs), rules);
  }

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const TokenRules& token_rules() const noexcept { return rules_; }
  std::size_t dimension() const noexcept { return vocabulary_.size(); }

  // The tf denominator runs over every word of the tweet, including words the vocabulary
  // has never seen; those words then contribute no entry of their own.
  SparseVector vectorize(std::string_view text) const {
    const auto counts = count_terms(tokenize(text, rules_));
    std::size_t max_count = 0;
    for (const auto& [_, c] : counts) max_count = std::max(max_count, c);
    std::vector<SparseEntry> pairs;
    pairs.reserve(counts.size());
    for (const auto& [term, c] : counts) {
      const auto j = vocabulary_.index_of(term);
      if (!j) continue;
      const double tf = 0.5 + 0.5 * static_cast<double>(c) / static_cast<double>(max_count);
      pairs.push_back({*j, tf * idf_[*j]});
    }
    return SparseVector::from_pairs(std::move(pairs));
  }

  friend bool operator==(const TfIdfModel& a, const TfIdfModel& b) {
    return a.vocabulary_ == b.vocabulary_ && a.rules_ == b.rules_;
  }

 private:
  Vocabulary vocabulary_;
  TokenRules rules_;
  std::vector<double> idf_;
};

}  // namespace fiomon
