#pragma once

// Subcommand implementations behind the fiomon CLI. Each run_* function reads its inputs,
// writes its outputs atomically (temp file + rename) and returns a summary; failures are
// thrown as fiomon::Error subclasses whose code() is the process exit code.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiomon/corpus.hpp"
#include "fiomon/error.hpp"
#include "fiomon/keyword_filter.hpp"
#include "fiomon/model_file.hpp"
#include "fiomon/svm.hpp"
#include "fiomon/timeline.hpp"

namespace fiomon {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Bad configuration or command-line values. Exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string input_path;
  std::string keywords_path;   // empty: built-in phrases
  std::string labeled_path;
  std::string model_path;
  std::string timeline_path;   // empty: built-in timeline
  std::string output_dir = ".";
  Strictness strictness = Strictness::kLenient;
  TrainingConfig training;
  ReportWindow report_window;
  std::optional<Date> daily_from;
  std::optional<Date> daily_to;
  bool quiet = false;
};

// Recognized keys of the flat config file; command-line flags use the same names with
// '_' spelled '-'.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "input",       "keywords", "labeled",          "model",           "timeline",
      "output",      "strict",   "c_param",          "tolerance",       "max_epochs",
      "seed",        "quiet",    "report_first_day", "report_last_day", "daily_from",
      "daily_to",
  };
  return keys;
}

using ConfigValues = std::map<std::string, std::string>;

/// Parses "key = value" lines. '#' starts a comment line; blank lines are skipped.
inline ConfigValues parse_config_text(std::istream& in) {
  ConfigValues values;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
    throw ConfigError(key + ": bad number '" + v + "'");
  }
  return out;
}

inline Date parse_config_date(const std::string& key, const std::string& v) {
  const auto d = parse_date(v);
  if (!d) throw ConfigError(key + ": expected YYYY-MM-DD, got '" + v + "'");
  return *d;
}

}  // namespace detail

/// Builds a validated config from merged key/value pairs.
inline PipelineConfig config_from_values(const ConfigValues& values) {
  PipelineConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  if (auto v = get("input")) cfg.input_path = *v;
  if (auto v = get("keywords")) cfg.keywords_path = *v;
  if (auto v = get("labeled")) cfg.labeled_path = *v;
  if (auto v = get("model")) cfg.model_path = *v;
  if (auto v = get("timeline")) cfg.timeline_path = *v;
  if (auto v = get("output")) cfg.output_dir = *v;
  if (auto v = get("strict")) cfg.strictness = detail::parse_bool("strict", *v) ? Strictness::kStrict : Strictness::kLenient;
  if (auto v = get("quiet")) cfg.quiet = detail::parse_bool("quiet", *v);
  if (auto v = get("c_param")) cfg.training.c = detail::parse_number<double>("c_param", *v);
  if (auto v = get("tolerance")) cfg.training.tolerance = detail::parse_number<double>("tolerance", *v);
  if (auto v = get("max_epochs")) cfg.training.max_epochs = detail::parse_number<std::size_t>("max_epochs", *v);
  if (auto v = get("seed")) cfg.training.seed = detail::parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("report_first_day")) cfg.report_window.first_day = detail::parse_config_date("report_first_day", *v);
  if (auto v = get("report_last_day")) cfg.report_window.last_day = detail::parse_config_date("report_last_day", *v);
  if (auto v = get("daily_from")) cfg.daily_from = detail::parse_config_date("daily_from", *v);
  if (auto v = get("daily_to")) cfg.daily_to = detail::parse_config_date("daily_to", *v);

  try {
    cfg.training.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.report_window.first_day && cfg.report_window.last_day &&
      *cfg.report_window.last_day < *cfg.report_window.first_day) {
    throw ConfigError("report window is inverted");
  }
  if (cfg.daily_from.has_value() != cfg.daily_to.has_value()) {
    throw ConfigError("daily_from and daily_to must be given together");
  }
  if (cfg.daily_from && *cfg.daily_to < *cfg.daily_from) throw ConfigError("daily range is inverted");
  return cfg;
}

/// Canonical "key=value" text of the settings that determine outputs. The output
/// directory and verbosity are left out so relocating a run does not change its hash.
inline std::string canonical_config(const PipelineConfig& cfg) {
  auto date = [](const std::optional<Date>& d) { return d ? format_date(*d) : std::string("-"); };
  std::ostringstream ss;
  ss << "input=" << cfg.input_path << '\n'
     << "keywords=" << cfg.keywords_path << '\n'
     << "labeled=" << cfg.labeled_path << '\n'
     << "model=" << cfg.model_path << '\n'
     << "timeline=" << cfg.timeline_path << '\n'
     << "strict=" << (cfg.strictness == Strictness::kStrict) << '\n'
     << "c_param=" << detail::format_real(cfg.training.c) << '\n'
     << "tolerance=" << detail::format_real(cfg.training.tolerance) << '\n'
     << "max_epochs=" << cfg.training.max_epochs << '\n'
     << "seed=" << cfg.training.seed << '\n'
     << "report_first_day=" << date(cfg.report_window.first_day) << '\n'
     << "report_last_day=" << date(cfg.report_window.last_day) << '\n'
     << "daily_from=" << date(cfg.daily_from) << '\n'
     << "daily_to=" << date(cfg.daily_to) << '\n';
  return ss.str();
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---- file helpers ----------------------------------------------------------------------

inline std::string read_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw IoError(std::string(what) + " path is not set");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + std::string(what) + " '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + std::string(what) + " '" + path + "'");
  return ss.str();
}

inline void require_readable(const std::string& path, std::string_view what) {
  if (path.empty()) throw IoError(std::string(what) + " path is not set");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + std::string(what) + " '" + path + "'");
}

inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline std::string serialize_corpus(const std::vector<TweetRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += serialize_tweet(r);
    out += '\n';
  }
  return out;
}

/// Diagnostics go to the sink (stderr in the CLI); `quiet` silences informational lines.
class Logger {
 public:
  explicit Logger(std::ostream* sink = &std::cerr, bool quiet = false) : sink_(sink), quiet_(quiet) {}
  void info(const std::string& msg) const {
    if (sink_ && !quiet_) *sink_ << msg << '\n';
  }
  void warn(const std::string& msg) const {
    if (sink_) *sink_ << "warning: " << msg << '\n';
  }

 private:
  std::ostream* sink_;
  bool quiet_;
};

inline Corpus read_corpus(const std::string& path, Strictness strictness, const Logger& log) {
  std::istringstream in(read_file(path, "input"));
  return load_corpus(in, strictness, [&](const ParseError& e) { log.warn("rejected " + path + ": " + e.what()); });
}

inline KeywordSet resolve_keywords(const PipelineConfig& cfg) {
  if (cfg.keywords_path.empty()) return default_keywords();
  std::istringstream in(read_file(cfg.keywords_path, "keywords file"));
  return load_keywords(in);
}

inline EventTimeline resolve_timeline(const PipelineConfig& cfg) {
  if (cfg.timeline_path.empty()) return builtin_cdc_timeline();
  std::istringstream in(read_file(cfg.timeline_path, "timeline file"));
  return load_timeline(in);
}

inline SvmModel read_model(const std::string& path) {
  std::istringstream in(read_file(path, "model file"));
  return load_model(in);
}

inline std::filesystem::path output_file(const PipelineConfig& cfg, std::string_view name) {
  return std::filesystem::path(cfg.output_dir) / std::string(name);
}

// ---- subcommands -------------------------------------------------------------------------

struct FilterSummary {
  std::size_t input_records = 0;
  std::size_t rejected = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

inline FilterSummary run_filter(const PipelineConfig& cfg, const Logger& log, const std::string& input,
                                const std::filesystem::path& destination) {
  const auto keywords = resolve_keywords(cfg);
  const auto corpus = read_corpus(input, cfg.strictness, log);
  const auto result = filter_corpus(corpus, keywords);
  write_file_atomic(destination, serialize_corpus(result.corpus.records));
  FilterSummary s{corpus.records.size(), corpus.rejected_count, result.kept, result.dropped};
  log.info("filter: " + std::to_string(s.kept) + " kept, " + std::to_string(s.dropped) + " dropped, " +
           std::to_string(s.rejected) + " rejected -> " + destination.string());
  return s;
}

inline FilterSummary run_filter(const PipelineConfig& cfg, const Logger& log) {
  return run_filter(cfg, log, cfg.input_path, output_file(cfg, "filtered.jsonl"));
}

struct TrainSummary {
  std::size_t relevant = 0;
  std::size_t irrelevant = 0;
  std::size_t vocabulary_size = 0;
  std::size_t epochs_run = 0;
  bool converged = false;
  double final_objective = 0.0;
  double training_accuracy = 0.0;
};

inline TrainSummary run_train(const PipelineConfig& cfg, const Logger& log) {
  if (cfg.model_path.empty()) throw IoError("model path is not set");
  std::istringstream in(read_file(cfg.labeled_path, "labeled file"));
  const auto labeled = load_labeled_set(in, cfg.strictness);
  const auto model = fit_classifier(labeled, cfg.training);

  std::size_t correct = 0;
  for (const auto& ex : labeled.examples) correct += model.predict(ex.record.text) == ex.label;

  write_file_atomic(cfg.model_path, save_model_string(model));
  TrainSummary s;
  s.relevant = labeled.relevant;
  s.irrelevant = labeled.irrelevant;
  s.vocabulary_size = model.vectorizer.dimension();
  s.epochs_run = model.svm.meta.epochs_run;
  s.converged = model.svm.meta.converged;
  s.final_objective = model.svm.meta.final_objective;
  s.training_accuracy = static_cast<double>(correct) / static_cast<double>(labeled.examples.size());
  if (!s.converged) log.warn("training stopped at max_epochs before reaching the tolerance");
  return s;
}

struct ClassifySummary {
  std::size_t input_records = 0;
  std::size_t rejected = 0;
  std::size_t relevant = 0;
  std::size_t irrelevant = 0;
};

inline ClassifySummary run_classify(const PipelineConfig& cfg, const Logger& log, const std::string& input,
                                    const std::filesystem::path& destination) {
  const auto model = read_model(cfg.model_path);
  const auto corpus = read_corpus(input, cfg.strictness, log);
  std::vector<TweetRecord> relevant;
  for (const auto& r : corpus.records) {
    double value = 0.0;
    try {
      value = model.decision_value(r.text);
    } catch (const std::out_of_range& e) {
      throw ModelError(std::string("model does not match its vocabulary: ") + e.what());
    }
    if (label_for(value) == Label::kRelevant) relevant.push_back(r);
  }
  write_file_atomic(destination, serialize_corpus(relevant));
  ClassifySummary s{corpus.records.size(), corpus.rejected_count, relevant.size(),
                    corpus.records.size() - relevant.size()};
  log.info("classify: " + std::to_string(s.relevant) + " relevant, " + std::to_string(s.irrelevant) +
           " not relevant -> " + destination.string());
  return s;
}

inline ClassifySummary run_classify(const PipelineConfig& cfg, const Logger& log) {
  return run_classify(cfg, log, cfg.input_path, output_file(cfg, "relevant.jsonl"));
}

struct ReportSummary {
  PeriodReport periods;
  std::vector<DailyCount> daily;
  std::string period_csv;
  std::string daily_csv;
};

inline void require_valid(const EventTimeline& timeline) {
  const auto violations = validate_timeline(timeline);
  if (violations.empty()) return;
  std::string msg = "timeline is invalid:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw TimelineError(msg);
}

inline ReportSummary run_report(const PipelineConfig& cfg, const Logger& log, const std::string& input) {
  const auto timeline = resolve_timeline(cfg);
  require_valid(timeline);
  const auto corpus = read_corpus(input, cfg.strictness, log);

  ReportSummary s;
  s.periods = bucket_counts(timeline, corpus.records, cfg.report_window);
  if (cfg.daily_from) {
    s.daily = daily_frequency(corpus.records, *cfg.daily_from, *cfg.daily_to);
  } else if (!corpus.records.empty()) {
    auto [lo, hi] = std::minmax_element(corpus.records.begin(), corpus.records.end(),
                                        [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    s.daily = daily_frequency(corpus.records, date_of(lo->timestamp), date_of(hi->timestamp));
  }
  s.period_csv = format_period_csv(s.periods);
  s.daily_csv = format_daily_csv(s.daily);
  write_file_atomic(output_file(cfg, "periods.csv"), s.period_csv);
  write_file_atomic(output_file(cfg, "daily.csv"), s.daily_csv);
  if (s.periods.outside_window > 0) {
    log.info("report: " + std::to_string(s.periods.outside_window) + " tweets outside the report window");
  }
  log.info("report: " + std::to_string(s.periods.rows.size()) + " periods, " + std::to_string(s.daily.size()) +
           " daily rows -> " + cfg.output_dir);
  return s;
}

inline ReportSummary run_report(const PipelineConfig& cfg, const Logger& log) {
  return run_report(cfg, log, cfg.input_path);
}

struct PipelineSummary {
  FilterSummary filter;
  ClassifySummary classify;
  ReportSummary report;
  std::string manifest;
};

/// filter -> classify -> report, followed by manifest.json. The model must already exist;
/// training is always a separate step.
inline PipelineSummary run_pipeline(const PipelineConfig& cfg, const Logger& log) {
  require_readable(cfg.input_path, "input");
  require_readable(cfg.model_path, "model file");
  if (!cfg.keywords_path.empty()) require_readable(cfg.keywords_path, "keywords file");
  if (!cfg.timeline_path.empty()) require_readable(cfg.timeline_path, "timeline file");

  PipelineSummary s;
  const auto filtered = output_file(cfg, "filtered.jsonl");
  const auto relevant = output_file(cfg, "relevant.jsonl");
  s.filter = run_filter(cfg, log, cfg.input_path, filtered);
  s.classify = run_classify(cfg, log, filtered.string(), relevant);
  s.report = run_report(cfg, log, relevant.string());

  nlohmann::ordered_json manifest;
  manifest["tool"] = "fiomon";
  manifest["version"] = kToolVersion;
  manifest["model_format"] = std::string(kModelMagic) + " " + std::string(kModelVersion);
  const auto canonical = canonical_config(cfg);
  manifest["config_hash"] = "fnv1a64:" + hex64(fnv1a64(canonical));
  manifest["model_hash"] = "fnv1a64:" + hex64(fnv1a64(read_file(cfg.model_path, "model file")));
  {
    auto& c = manifest["config"];
    std::istringstream lines(canonical);
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      c[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  auto& stages = manifest["stages"];
  stages["filter"] = {{"input_records", s.filter.input_records},
                      {"rejected", s.filter.rejected},
                      {"kept", s.filter.kept},
                      {"dropped", s.filter.dropped}};
  stages["classify"] = {{"input_records", s.classify.input_records},
                        {"rejected", s.classify.rejected},
                        {"relevant", s.classify.relevant},
                        {"not_relevant", s.classify.irrelevant}};
  nlohmann::ordered_json periods = nlohmann::ordered_json::array();
  for (const auto& r : s.report.periods.rows) {
    periods.push_back({{"period_start", r.start ? format_date(*r.start) : "open"},
                       {"period_end", r.end ? format_date(*r.end) : "open"},
                       {"tweet_count", r.tweet_count}});
  }
  stages["report"] = {{"periods", periods},
                      {"period_total", s.report.periods.total()},
                      {"outside_window", s.report.periods.outside_window},
                      {"daily_rows", s.report.daily.size()}};
  manifest["outputs"] = {"filtered.jsonl", "relevant.jsonl", "periods.csv", "daily.csv"};
  s.manifest = manifest.dump(2) + "\n";
  write_file_atomic(output_file(cfg, "manifest.json"), s.manifest);
  return s;
}

}  // namespace fiomon
