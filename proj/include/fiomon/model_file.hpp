#pragma once

// Classifier model = fitted tf-idf vectorizer + linear SVM, persisted as one text file.
//
//   fiomon-model v1
//   token_rules scheme=alnum min_length=2 drop_numeric=1
//   corpus_size <N>
//   terms <n>
//   <doc_frequency>\t<term>          n lines, in index order
//   weights <n>
//   <weight>                         n lines, in index order
//   bias <value>
//   meta c=<value> epochs_run=<k> final_objective=<value> converged=<0|1>
//   end
//
// Reals are written in the shortest decimal form that reads back to the same double, so a
// save/load cycle is bit-exact.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fiomon/error.hpp"
#include "fiomon/svm.hpp"
#include "fiomon/vectorizer.hpp"

namespace fiomon {

inline constexpr std::string_view kModelMagic = "fiomon-model";
inline constexpr std::string_view kModelVersion = "v1";

struct SvmModel {
  TfIdfModel vectorizer;
  LinearSvm svm;

  SparseVector vectorize(std::string_view text) const { return vectorizer.vectorize(text); }
  double decision_value(std::string_view text) const {
    return fiomon::decision_value(svm, vectorize(text));
  }
  Label predict(std::string_view text) const { return label_for(decision_value(text)); }

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

namespace detail {

inline std::string format_real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ModelError("model file: bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return v;
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw ModelError("model file: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::string next(std::string_view what) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ModelError("model file: truncated, expected " + std::string(what));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Reads "<key> <value>" and returns value.
  std::string keyed(std::string_view key) {
    const auto line = next(key);
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 || line[key.size()] != ' ') {
      throw ModelError("model file: expected '" + std::string(key) + "', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }

 private:
  std::istream& in_;
};

// Splits "a=1 b=2" into values for the expected keys, in order.
inline std::vector<std::string> keyed_fields(const std::string& text,
                                             const std::vector<std::string_view>& keys,
                                             std::string_view section) {
  std::istringstream ss(text);
  std::vector<std::string> values;
  std::string field;
  for (const auto key : keys) {
    if (!(ss >> field) || field.size() <= key.size() || field.compare(0, key.size(), key) != 0 ||
        field[key.size()] != '=') {
      throw ModelError("model file: " + std::string(section) + " expects '" + std::string(key) + "='");
    }
    values.push_back(field.substr(key.size() + 1));
  }
  if (ss >> field) throw ModelError("model file: unexpected field '" + field + "' in " + std::string(section));
  return values;
}

}  // namespace detail

/// Throws ModelError if a stored real is non-finite or the dimensions disagree.
inline void save_model(const SvmModel& model, std::ostream& out) {
  const auto& vocab = model.vectorizer.vocabulary();
  const auto& rules = model.vectorizer.token_rules();
  if (model.svm.weights.size() != vocab.size()) {
    throw ModelError("weights length " + std::to_string(model.svm.weights.size()) +
                     " differs from vocabulary size " + std::to_string(vocab.size()));
  }
  auto finite = [](double v) {
    if (!std::isfinite(v)) throw ModelError("refusing to save a model with a non-finite value");
    return detail::format_real(v);
  };

  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "token_rules scheme=" << TokenRules::kScheme << " min_length=" << rules.min_length
      << " drop_numeric=" << (rules.drop_numeric ? 1 : 0) << '\n';
  out << "corpus_size " << vocab.corpus_size() << '\n';
  out << "terms " << vocab.size() << '\n';
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    out << vocab.doc_frequencies()[j] << '\t' << vocab.terms()[j] << '\n';
  }
  out << "weights " << model.svm.weights.size() << '\n';
  for (const double w : model.svm.weights) out << finite(w) << '\n';
  out << "bias " << finite(model.svm.bias) << '\n';
  const auto& meta = model.svm.meta;
  out << "meta c=" << finite(meta.c) << " epochs_run=" << meta.epochs_run
      << " final_objective=" << finite(meta.final_objective)
      << " converged=" << (meta.converged ? 1 : 0) << '\n';
  out << "end\n";
  if (!out) throw IoError("failed writing model");
}

inline std::string save_model_string(const SvmModel& model) {
  std::ostringstream ss;
  save_model(model, ss);
  return ss.str();
}

/// Throws ModelError on version mismatch, corrupt content, or dimension mismatch.
inline SvmModel load_model(std::istream& in) {
  detail::ModelReader reader(in);

  const auto header = reader.next("header");
  const auto space = header.find(' ');
  if (space == std::string::npos || std::string_view(header).substr(0, space) != kModelMagic) {
    throw ModelError("not a model file (bad header '" + header + "')");
  }
  if (std::string_view(header).substr(space + 1) != kModelVersion) {
    throw ModelError("unsupported model version '" + header.substr(space + 1) + "', expected " +
                     std::string(kModelVersion));
  }

  const auto rule_fields =
      detail::keyed_fields(reader.keyed("token_rules"), {"scheme", "min_length", "drop_numeric"}, "token_rules");
  if (rule_fields[0] != TokenRules::kScheme) {
    throw ModelError("unsupported tokenizer scheme '" + rule_fields[0] + "'");
  }
  TokenRules rules;
  rules.min_length = detail::parse_count(rule_fields[1], "min_length");
  if (rule_fields[2] != "0" && rule_fields[2] != "1") throw ModelError("model file: bad drop_numeric");
  rules.drop_numeric = rule_fields[2] == "1";

  const auto corpus_size = detail::parse_count(reader.keyed("corpus_size"), "corpus_size");
  const auto n_terms = detail::parse_count(reader.keyed("terms"), "term count");
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  terms.reserve(n_terms);
  df.reserve(n_terms);
  for (std::size_t j = 0; j < n_terms; ++j) {
    const auto line = reader.next("vocabulary entry");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ModelError("model file: bad vocabulary entry '" + line + "'");
    df.push_back(detail::parse_count(std::string_view(line).substr(0, tab), "document frequency"));
    terms.push_back(line.substr(tab + 1));
  }

  const auto n_weights = detail::parse_count(reader.keyed("weights"), "weight count");
  if (n_weights != n_terms) {
    throw ModelError("dimension mismatch: " + std::to_string(n_weights) + " weights for " +
                     std::to_string(n_terms) + " vocabulary terms");
  }
  SvmModel model;
  model.svm.weights.reserve(n_weights);
  for (std::size_t j = 0; j < n_weights; ++j) {
    model.svm.weights.push_back(detail::parse_real(reader.next("weight"), "weight"));
  }
  model.svm.bias = detail::parse_real(reader.keyed("bias"), "bias");

  const auto meta = detail::keyed_fields(reader.keyed("meta"),
                                         {"c", "epochs_run", "final_objective", "converged"}, "meta");
  model.svm.meta.c = detail::parse_real(meta[0], "c");
  model.svm.meta.epochs_run = detail::parse_count(meta[1], "epochs_run");
  model.svm.meta.final_objective = detail::parse_real(meta[2], "final_objective");
  if (meta[3] != "0" && meta[3] != "1") throw ModelError("model file: bad converged flag");
  model.svm.meta.converged = meta[3] == "1";

  if (reader.next("end") != "end") throw ModelError("model file: missing 'end' marker");

  try {
    model.vectorizer = TfIdfModel(Vocabulary(std::move(terms), std::move(df), corpus_size), rules);
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
  return model;
}

inline SvmModel load_model_string(const std::string& text) {
  std::istringstream ss(text);
  return load_model(ss);
}

/// Fits the vectorizer on the labeled texts, then trains the SVM on their tf-idf vectors.
inline SvmModel fit_classifier(const LabeledSet& labeled, const TrainingConfig& config,
                               const TokenRules& rules = {}, const EpochObserver& observer = {}) {
  std::vector<std::string_view> texts;
  texts.reserve(labeled.examples.size());
  for (const auto& ex : labeled.examples) texts.push_back(ex.record.text);

  SvmModel model;
  try {
    model.vectorizer = TfIdfModel::fit(texts, rules);
  } catch (const std::invalid_argument& e) {
    throw TrainingDataError(e.what());
  }
  std::vector<TrainingExample> examples;
  examples.reserve(labeled.examples.size());
  for (const auto& ex : labeled.examples) {
    examples.push_back({model.vectorizer.vectorize(ex.record.text), ex.label});
  }
  model.svm = train(examples, model.vectorizer.dimension(), config, observer);
  return model;
}

}  // namespace fiomon
