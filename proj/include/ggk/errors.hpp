#pragma once

#include <stdexcept>
#include <string>

#include "ggk/natural.hpp"

namespace ggk {

  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Caller violated a documented precondition.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // Malformed structure, e.g. a cyclic SLP or a bad rewriting table.
  class StructureError : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    ParseError(std::string msg, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column "
                + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

   private:
    std::size_t line_;
    std::size_t column_;
  };

  // A result would be longer than the configured cap.
  class ResourceExceeded : public Error {
   public:
    explicit ResourceExceeded(natural required)
        : Error("resource cap exceeded, required length "
                + required.str()),
          required_(std::move(required)) {}

    natural const& required() const noexcept { return required_; }

   private:
    natural required_;
  };

  // An enumeration budget was exhausted; the answer is unknown.
  class LimitsExceeded : public Error {
   public:
    using Error::Error;
  };

}  // namespace ggk
