#pragma once

#include <stdexcept>
#include <string>

namespace sos {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tensor carried the wrong index-convention tag for the requested operation.
class ConventionError : public Error {
 public:
  using Error::Error;
};

/// Mismatched mode counts or array dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An input violated a required symmetry (complex symmetry, Sz, hermiticity).
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// A numerical decomposition step (eigen/Takagi/normal diagonalization) failed.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Dense Fock-space construction refused because the mode count is over the cap.
class OracleSizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sos
