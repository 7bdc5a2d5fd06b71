// fiomon: keyword filter -> tf-idf/SVM relevance classifier -> announcement-period report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fiomon/fiomon.hpp"

namespace {

// Options shared by the data subcommands. Values land in `given` only when passed on the
// command line, so they can override config-file values key by key.
struct CommonOptions {
  std::string config_path;
  std::map<std::string, std::string> given;
  bool strict = false;
  bool quiet = false;
};

void add_value(CLI::App* cmd, CommonOptions& opts, const std::string& flag, const std::string& key,
               const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&opts, key](const std::string& v) { opts.given[key] = v; }, help);
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  add_value(cmd, opts, "--input", "input", "input records (one JSON object per line)");
  add_value(cmd, opts, "--output", "output", "output directory");
  add_value(cmd, opts, "--keywords", "keywords", "keyword phrase file (default: built-in phrases)");
  add_value(cmd, opts, "--labeled", "labeled", "labeled training records");
  add_value(cmd, opts, "--model", "model", "classifier model file");
  add_value(cmd, opts, "--timeline", "timeline", "event timeline table (default: built-in)");
  add_value(cmd, opts, "--seed", "seed", "training shuffle seed");
  add_value(cmd, opts, "--c-param", "c_param", "soft-margin penalty C");
  add_value(cmd, opts, "--tolerance", "tolerance", "projected-gradient stopping tolerance");
  add_value(cmd, opts, "--max-epochs", "max_epochs", "maximum training epochs");
  add_value(cmd, opts, "--report-first-day", "report_first_day", "first day (YYYY-MM-DD) counted in period reports");
  add_value(cmd, opts, "--report-last-day", "report_last_day", "last day (YYYY-MM-DD) counted in period reports");
  add_value(cmd, opts, "--daily-from", "daily_from", "first day of the daily series");
  add_value(cmd, opts, "--daily-to", "daily_to", "last day of the daily series");
  cmd->add_flag("--strict", opts.strict, "abort on the first malformed record; reject unknown fields");
  cmd->add_flag("--quiet", opts.quiet, "suppress informational diagnostics");
}

fiomon::PipelineConfig resolve(const CommonOptions& opts) {
  fiomon::ConfigValues values;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw fiomon::IoError("cannot open config file '" + opts.config_path + "'");
    values = fiomon::parse_config_text(in);
  }
  for (const auto& [k, v] : opts.given) values[k] = v;
  if (opts.strict) values["strict"] = "true";
  if (opts.quiet) values["quiet"] = "true";
  return fiomon::config_from_values(values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foodborne-illness tweet monitoring: filter, train, classify, report"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fiomon::kToolVersion));

  CommonOptions opts;
  auto* filter = app.add_subcommand("filter", "keep tweets matching a keyword phrase");
  auto* train = app.add_subcommand("train", "fit the tf-idf vectorizer and SVM on a labeled set");
  auto* classify = app.add_subcommand("classify", "keep tweets the model labels relevant");
  auto* report = app.add_subcommand("report", "count relevant tweets per announcement period and per day");
  auto* pipeline = app.add_subcommand("pipeline", "filter, classify and report in one run");
  for (auto* cmd : {filter, train, classify, report, pipeline}) add_common(cmd, opts);

  bool print_timeline = false;
  bool print_keywords = false;
  auto* timeline = app.add_subcommand("timeline", "inspect the built-in announcement timeline");
  timeline->add_flag("--print-builtin", print_timeline, "write the built-in timeline table to stdout")->required();
  auto* keywords = app.add_subcommand("keywords", "inspect the built-in keyword phrases");
  keywords->add_flag("--print-builtin", print_keywords, "write the built-in phrase file to stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (timeline->parsed()) {
      std::cout << fiomon::format_timeline(fiomon::builtin_cdc_timeline());
      return 0;
    }
    if (keywords->parsed()) {
      std::cout << fiomon::format_keywords(fiomon::default_keywords());
      return 0;
    }

    const auto cfg = resolve(opts);
    const fiomon::Logger log(&std::cerr, cfg.quiet);

    if (filter->parsed()) {
      fiomon::run_filter(cfg, log);
    } else if (train->parsed()) {
      const auto s = fiomon::run_train(cfg, log);
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "train: relevant %zu, not relevant %zu, vocabulary %zu, epochs %zu%s, objective %.10g, "
                    "training accuracy %.4f -> %s",
                    s.relevant, s.irrelevant, s.vocabulary_size, s.epochs_run, s.converged ? "" : " (not converged)",
                    s.final_objective, s.training_accuracy, cfg.model_path.c_str());
      log.info(buf);
    } else if (classify->parsed()) {
      fiomon::run_classify(cfg, log);
    } else if (report->parsed()) {
      std::cout << fiomon::run_report(cfg, log).period_csv;
    } else if (pipeline->parsed()) {
      std::cout << fiomon::run_pipeline(cfg, log).report.period_csv;
    }
  } catch (const fiomon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const fiomon::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
