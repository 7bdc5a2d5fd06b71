#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fiomon {

// Process exit codes used by the CLI. Each error class below maps to one.
enum class ExitCode : int {
  kOk = 0,
  kIo = 2,
  kParse = 3,
  kTrainingData = 4,
  kModel = 5,
  kTimeline = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::kIo, what) {}
};

// A bad input record. line is 1-based; 0 when the record did not come from a numbered stream.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string reason)
      : Error(ExitCode::kParse, format(line, reason)), line_(line), reason_(std::move(reason)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  static std::string format(std::size_t line, const std::string& reason) {
    return line == 0 ? reason : "line " + std::to_string(line) + ": " + reason;
  }
  std::size_t line_;
  std::string reason_;
};

class TrainingDataError : public Error {
 public:
  explicit TrainingDataError(const std::string& what) : Error(ExitCode::kTrainingData, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ExitCode::kModel, what) {}
};

class TimelineError : public Error {
 public:
  explicit TimelineError(const std::string& what) : Error(ExitCode::kTimeline, what) {}
};

}  // namespace fiomon
