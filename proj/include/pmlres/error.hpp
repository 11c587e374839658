#pragma once

#include <stdexcept>
#include <string>

namespace pmlres {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-symmetric matrices, bad parameters, unreadable files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A symmetric matrix that is not positive definite.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a singular point (coincident points, z = 0).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a result does not hold (e.g. r1 too small).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Obstacle or truncation data that cannot be meshed.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Mesh generation produced an inverted element.
class GenerationError : public Error {
 public:
  GenerationError(const std::string& what, int cell) : Error(what), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

/// Non-positive mapping Jacobian found during assembly.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Zero pivot column during sparse or dense LU.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, long index) : Error(what), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

/// Shift coincides with an eigenvalue (factorization of K - s M failed).
class ShiftRejectedError : public Error {
 public:
  using Error::Error;
};

/// Argument-principle count and located roots disagree.
class IncompleteSearchError : public Error {
 public:
  IncompleteSearchError(const std::string& what, int expected, int found)
      : Error(what), expected_(expected), found_(found) {}
  int expected() const { return expected_; }
  int found() const { return found_; }

 private:
  int expected_;
  int found_;
};

}  // namespace pmlres
