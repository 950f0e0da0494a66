#pragma once

#include <stdexcept>
#include <string>

namespace pathlim {

enum class ErrorKind {
  input,         // malformed text, unknown vertex, invalid path
  degenerate,    // spectral radius zero where a positive one is required
  precondition,  // argument outside the domain of the operation
  numeric,       // iteration did not converge, singular system
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::input, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline Error input_error(const std::string& what) {
  return Error(ErrorKind::input, what);
}
inline Error degenerate_error(const std::string& what) {
  return Error(ErrorKind::degenerate, what);
}
inline Error precondition_error(const std::string& what) {
  return Error(ErrorKind::precondition, what);
}
inline Error numeric_error(const std::string& what) {
  return Error(ErrorKind::numeric, what);
}

}  // namespace pathlim
