#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radsim {

// Root of every error the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument lies outside the domain of the operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Inputs have incompatible or insufficient lengths, rates or grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A configuration cannot be realised (Nyquist, non-integer samples per bit, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position),
        location_("position " + std::to_string(position)) {}

  // Structured inputs report a path such as "/entries/2/template" instead.
  ParseError(const std::string& what, const std::string& location)
      : Error(what + " (at " + location + ")"), location_(location) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::size_t position_{0};
  std::string location_;
};

class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t bit_index)
      : Error(what + " (at bit " + std::to_string(bit_index) + ")"), bit_index_(bit_index) {}

  std::size_t bit_index() const noexcept { return bit_index_; }

 private:
  std::size_t bit_index_;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace radsim
