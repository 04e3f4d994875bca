// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#ifndef WMLAB_ERROR_HPP_
#define WMLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relations over different universes, ill-formed graphs or structures.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Too few read values supplied to a thread run.
class ArityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A construction that the correctness argument says must succeed did not.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace wmlab

#endif  // WMLAB_ERROR_HPP_
