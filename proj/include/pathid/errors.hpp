#pragma once

#include <stdexcept>
#include <string>

namespace pathid {

// Base class for all library errors so callers can catch the whole family.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Syntactic problem in an .exp file. line/column are 1-based.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& msg)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line(line), column(column) {}
  int line;
  int column;
};

// Semantically invalid experiment (duplicate names, |eps| out of range, ...).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg)
      : Error("validation error: " + msg) {}
};

// A squeezer application tried to push a mode past the photon cap.
class PerturbativeOverflow : public Error {
public:
  explicit PerturbativeOverflow(const std::string& msg) : Error(msg) {}
};

// No term of the state survives the detection pattern.
class EmptyPostSelection : public Error {
public:
  explicit EmptyPostSelection(const std::string& msg) : Error(msg) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// Count record with zero total counts.
class EmptyRecord : public Error {
public:
  explicit EmptyRecord(const std::string& msg) : Error(msg) {}
};

// Singular normal equations in the visibility fit.
class FitError : public Error {
public:
  explicit FitError(const std::string& msg) : Error(msg) {}
};

}  // namespace pathid
