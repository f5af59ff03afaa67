#ifndef ORBITLAB_ALGEBRA_ERRORS_HPP
#define ORBITLAB_ALGEBRA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orbitlab {

// Arity or dimension mismatch between operands.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller-supplied term budget was exhausted while building a polynomial.
class TermCapExceeded : public std::runtime_error {
 public:
  explicit TermCapExceeded(std::size_t cap)
      : std::runtime_error("term cap of " + std::to_string(cap) + " exceeded"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// Syntax error in a textual polynomial / config; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Operation requested on data that does not carry what it needs
// (e.g. return sets on an orbit whose points were elided).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbitlab

#endif
