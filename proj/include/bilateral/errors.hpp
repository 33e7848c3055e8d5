#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bilateral {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in formula text. `position` is a 0-based character offset
/// into the input.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position)
      : Error(std::move(message)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};

class ArityMismatchError : public ParseError {
 public:
  using ParseError::ParseError;
};

class FreeVariableError : public Error {
 public:
  using Error::Error;
};

/// A standard interpretation was asked for an atom outside its table.
class MissingAtomError : public Error {
 public:
  using Error::Error;
};

/// A grounded interpretation's evaluator failed (or was absent) on a cache
/// miss. Nothing is cached when this is raised.
class EvaluatorError : public Error {
 public:
  using Error::Error;
};

class CacheIoError : public Error {
 public:
  using Error::Error;
};

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(std::string message, std::size_t atom_count)
      : Error(std::move(message)), atom_count_(atom_count) {}
  std::size_t atom_count() const { return atom_count_; }

 private:
  std::size_t atom_count_;
};

class MissingTemplateError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Dataset file problem; `line` is 1-based, 0 when not line-specific.
class DatasetError : public Error {
 public:
  DatasetError(std::string message, std::size_t line = 0)
      : Error(std::move(message)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A metric is undefined on the given records (e.g. a class has no gold
/// instances among the non-abstained records). Reported, never silently 0.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class EmptyRecordsError : public Error {
 public:
  using Error::Error;
};

}  // namespace bilateral
