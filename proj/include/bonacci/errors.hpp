#pragma once

#include <stdexcept>
#include <string>

namespace bonacci {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDegree : public Error {
 public:
  using Error::Error;
};

class InvalidLetter : public Error {
 public:
  using Error::Error;
};

class InvalidProbability : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size or depth limit.
class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Sign determination could not separate a nonzero element from zero.
class CertificationError : public Error {
 public:
  using Error::Error;
};

class LevelTooSmall : public Error {
 public:
  using Error::Error;
};

class NoEdge : public Error {
 public:
  using Error::Error;
};

/// Label-driven merge decisions disagree with exact point comparison.
class AuditFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bonacci
