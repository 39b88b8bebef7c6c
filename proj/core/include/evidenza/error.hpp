#pragma once

#include <stdexcept>
#include <string>

namespace evidenza {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A probability mass needed by a sampler is too small to represent in double precision.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

/// The requested likelihood contour encloses no prior mass (y at or above the likelihood maximum).
class EmptyConstraintError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration (unknown ids, bad counts, bad grids).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace evidenza
