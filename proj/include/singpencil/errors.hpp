#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace singpencil {

/// Invalid input: shape mismatch, bad parameter, degenerate pencil.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The dense eigensolver (or another iteration) did not converge.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& routine, int info, const std::string& what)
      : std::runtime_error(routine + " failed (info=" + std::to_string(info) + "): " + what),
        routine_(routine),
        info_(info) {}

  const std::string& routine() const noexcept { return routine_; }
  int info() const noexcept { return info_; }

 private:
  std::string routine_;
  int info_;
};

/// Malformed input file. Carries a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// 1-based line and column of a 1-based byte offset into `text`.
inline std::pair<int, int> text_position(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace singpencil
