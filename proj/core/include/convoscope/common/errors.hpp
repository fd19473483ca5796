#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace convoscope {

// Root of every error thrown by the library. Each subclass maps to one
// failure category so callers (and the HTTP layer) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class TrainingDataError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::string topic, std::size_t epoch)
      : Error("training diverged (NaN loss) for topic '" + topic + "' at epoch " +
              std::to_string(epoch)),
        topic_(std::move(topic)),
        epoch_(epoch) {}

  const std::string& topic() const noexcept { return topic_; }
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::string topic_;
  std::size_t epoch_;
};

class FeatureMismatchError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OutOfVocabularyError : public Error {
 public:
  using Error::Error;
};

class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

class IndexingError : public Error {
 public:
  using Error::Error;
};

// Malformed or semantically invalid FilterSelection. Carries one diagnostic
// per offending field, e.g. {"facets.clinic", "unknown value 'Z'"}.
class SelectionError : public Error {
 public:
  struct Diagnostic {
    std::string field;
    std::string message;
  };

  explicit SelectionError(std::vector<Diagnostic> diagnostics)
      : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  SelectionError(std::string field, std::string message)
      : SelectionError(std::vector<Diagnostic>{{std::move(field), std::move(message)}}) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "invalid selection";
    for (const auto& d : diagnostics) out += "; " + d.field + ": " + d.message;
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Durable write failed; the caller may retry.
class StorageError : public Error {
 public:
  using Error::Error;
};

}  // namespace convoscope
