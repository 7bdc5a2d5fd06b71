// Writes a deterministic demo dataset: labeled.jsonl (100 relevant + 100 not relevant) and
// stream.jsonl (a raw stream over Sept 1 - Oct 20, 2015).

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fiomon/fiomon.hpp"
#include "fiomon/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic fiomon dataset"};
  std::string dir = "synthetic";
  std::size_t stream_size = 20000;
  std::uint64_t seed = 11;
  app.add_option("--output", dir, "destination directory");
  app.add_option("--stream-size", stream_size, "number of raw stream records");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    using namespace fiomon;
    const auto labeled = synthetic::labeled_set(100, 100);
    std::string labeled_text;
    for (const auto& ex : labeled.examples) labeled_text += synthetic::serialize_labeled(ex) + "\n";
    write_file_atomic(std::filesystem::path(dir) / "labeled.jsonl", labeled_text);

    const auto records = synthetic::stream(stream_size, start_of(*parse_date("2015-09-01")),
                                           start_of(*parse_date("2015-10-21")), seed);
    write_file_atomic(std::filesystem::path(dir) / "stream.jsonl", serialize_corpus(records));
    std::cerr << "wrote " << labeled.examples.size() << " labeled and " << records.size() << " stream records to "
              << dir << '\n';
  } catch (const fiomon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  }
  return 0;
}
