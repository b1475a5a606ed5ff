#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semstore {

// Base of every failure the library reports. `code()` is a stable,
// machine-readable token (e.g. "empty_query", "syntax_error") that the
// service copies verbatim into error bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed textual input. Line-oriented formats report a 1-based line,
// expression parsers a 0-based byte offset.
class ParseError : public Error {
 public:
  enum class Unit { Line, Offset };

  ParseError(std::string code, const std::string& detail, Unit unit, std::size_t position)
      : Error(std::move(code), (unit == Unit::Line ? "line " : "offset ") +
                                   std::to_string(position) + ": " + detail),
        unit_(unit),
        position_(position) {}

  Unit unit() const noexcept { return unit_; }
  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return unit_ == Unit::Line ? position_ : 0; }

 private:
  Unit unit_;
  std::size_t position_;
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error("not_found", what) {}
};

}  // namespace semstore
