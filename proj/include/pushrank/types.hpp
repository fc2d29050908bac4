#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pushrank {

using vertex_t = std::uint32_t;
using edge_t = std::uint64_t;

struct Edge {
  vertex_t source;
  vertex_t target;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based; 0 means "whole input".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid parameters (damping outside (0,1), xi <= 0, K < 1, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The input is valid but exceeds a size guard of the requested solver.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pushrank
