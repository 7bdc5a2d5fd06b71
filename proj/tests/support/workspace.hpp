#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fiomon/pipeline.hpp"
#include "fiomon/synthetic.hpp"

namespace testing_support {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("fiomon-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

inline RunResult run(const std::string& binary, const std::string& args, const fs::path& scratch) {
  const auto out = (scratch / "stdout.txt").string();
  const auto err = (scratch / "stderr.txt").string();
  const std::string cmd = "'" + binary + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

inline std::string labeled_file_text(const fiomon::LabeledSet& set) {
  std::string text;
  for (const auto& ex : set.examples) text += fiomon::synthetic::serialize_labeled(ex) + "\n";
  return text;
}

/// labeled.jsonl (100 + 100) and stream.jsonl (`stream_size` records, Sept 1 - Oct 20 2015).
inline void write_dataset(const fs::path& dir, std::size_t stream_size) {
  using namespace fiomon;
  write_text((dir / "labeled.jsonl").string(), labeled_file_text(synthetic::labeled_set(100, 100)));
  write_text((dir / "stream.jsonl").string(),
             serialize_corpus(synthetic::stream(stream_size, start_of(*parse_date("2015-09-01")),
                                                start_of(*parse_date("2015-10-21")))));
}

}  // namespace testing_support
