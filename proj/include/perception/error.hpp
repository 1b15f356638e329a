#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perception {

// Bad arguments: empty inputs, non-finite values, mismatched dimensions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (n > S for C(S, n)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A scaled value does not fit in the 64-bit integer representation.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised by operations that need contrast (S > 0) when given a neuron with S == 0.
class DegenerateModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A metric that cannot be computed for the given labels (single class AUC).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Anything wrong with an input file. Subclasses carry the specific failure.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public DataError {
 public:
  explicit FileNotFound(const std::string& path)
      : DataError("cannot open file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, std::string column, const std::string& what)
      : DataError(what), row_(row), column_(std::move(column)) {}
  // 1-based line number in the file; the header is row 1.
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class LabelError : public ParseError {
 public:
  using ParseError::ParseError;
};

class RaggedRow : public ParseError {
 public:
  using ParseError::ParseError;
};

class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace perception
