#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sembed {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or configuration: flag values, shape mismatches, ratio sums.
class ValidationError : public Error {
  using Error::Error;
};

// Malformed data files: binary model/embedding files, TSV rows, records.
class FormatError : public Error {
  using Error::Error;
};

// XML structure violations of the supported subset (missing body, bad root).
class StructureError : public Error {
  using Error::Error;
};

// Low-level XML syntax failure; carries the byte offset of the bad input.
class ParseError : public FormatError {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : FormatError(what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace sembed
