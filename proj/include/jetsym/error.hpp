#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetsym {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL input. `position()` is a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 protected:
  struct Located {};
  ParseError(Located, const std::string& message, std::size_t position) : Error(message), position_(position) {}

 private:
  std::size_t position_;
};

class UndeclaredSymbolError : public ParseError {
 public:
  UndeclaredSymbolError(const std::string& name, std::size_t position)
      : ParseError("undeclared symbol '" + name + "'", position), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class OrderOverflowError : public Error {
 public:
  using Error::Error;
};

class DuplicateNameError : public Error {
 public:
  using Error::Error;
};

class CyclicRulesError : public Error {
 public:
  using Error::Error;
};

/// A denominator vanished, or a value is undefined on the requested domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundSymbolError : public Error {
 public:
  using Error::Error;
};

class NonlinearLeadingError : public Error {
 public:
  using Error::Error;
};

class InconsistentManifoldError : public Error {
 public:
  using Error::Error;
};

class NotReducibleError : public Error {
 public:
  using Error::Error;
};

class SingularSectionError : public Error {
 public:
  using Error::Error;
};

class ProjectionUndefinedError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class NonInvertibleTransformError : public Error {
 public:
  using Error::Error;
};

class UnknownEntryError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetsym
