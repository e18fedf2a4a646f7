#pragma once

#include <stdexcept>
#include <string>

namespace leaklint {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// File cannot be read, or its bytes are not valid UTF-8.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Notebook JSON is unparseable or lacks a usable cell list.
class MalformedNotebook : public Error {
 public:
  using Error::Error;
};

/// Flat line number outside [1, line count].
class OutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Recognized construct that lies outside the analyzed grammar subset.
class SyntaxUnsupported : public Error {
 public:
  SyntaxUnsupported(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": unsupported construct: " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigParseError : public Error {
 public:
  ConfigParseError(int line, const std::string& what)
      : Error("config line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class NotFixable : public Error {
 public:
  using Error::Error;
};

/// The unit no longer matches the model the instance was detected on.
class StaleModel : public Error {
 public:
  using Error::Error;
};

/// Patch targets overlap each other.
class OverlapConflict : public Error {
 public:
  using Error::Error;
};

/// Patch was synthesized against different unit contents.
class SpanStale : public Error {
 public:
  using Error::Error;
};

class MissingSidecar : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace leaklint
