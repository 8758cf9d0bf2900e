#pragma once

#include <stdexcept>
#include <string>

namespace polyfair {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes (see cli/commands.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: schema violations, unparsable cells, bad documents.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

// Network layer dimensions that do not chain; `layer` is 1-based.
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, int layer) : Error(what), layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A requested computation exceeds a documented feasibility ceiling
// (grid cells, categorical assignments, branch count).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public InfeasibleError {
 public:
  ResourceError(const std::string& what, long explored, long emitted)
      : InfeasibleError(what), explored_(explored), emitted_(emitted) {}
  long explored() const { return explored_; }
  long emitted() const { return emitted_; }

 private:
  long explored_;
  long emitted_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invariant of an internal structure broken (e.g. LP unbounded over a
// polytope that is supposed to be bounded).
class InternalError : public Error {
 public:
  using Error::Error;
};

class EmptyPolytopeError : public Error {
 public:
  using Error::Error;
};

// Lower-dimensional polytope handed to vertex enumeration. Callers treat the
// region as having zero volume.
class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace polyfair
