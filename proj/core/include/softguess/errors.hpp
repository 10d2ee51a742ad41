#pragma once

#include <stdexcept>
#include <string>

namespace softguess {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class BadDimensions : public Error {
 public:
  using Error::Error;
};

class UnsupportedCode : public Error {
 public:
  using Error::Error;
};

class PositionOutOfScope : public Error {
 public:
  using Error::Error;
};

/// An oracle-only routine was asked to work beyond its enumeration limit.
class ScaleExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace softguess
