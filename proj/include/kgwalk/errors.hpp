#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgwalk {

// Malformed textual input (N-Triples, gold files, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string text, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what + ": " + text),
        line_(line),
        text_(std::move(text)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t line_;
  std::string text_;
};

// Embedding file violates the word2vec text format.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Unknown entity, predicate or token.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what, std::size_t progress = 0)
      : std::runtime_error(what), progress_(progress) {}

  // Units of work completed before the failure (e.g. walks written).
  std::size_t progress() const noexcept { return progress_; }

 private:
  std::size_t progress_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training diverged or metric is undefined.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kgwalk
