#pragma once

#include <stdexcept>
#include <string>

namespace dxg {

// Base of every error raised by the library. Per-paper conditions that the
// batch paths tolerate (no citers, no references) are never thrown; they are
// carried as flags on the result instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownPaper : public Error {
 public:
  explicit UnknownPaper(const std::string& id) : Error("unknown paper: " + id) {}
};

class DuplicatePaper : public Error {
 public:
  explicit DuplicatePaper(const std::string& id) : Error("duplicate paper id: " + id) {}
};

class InvalidRecord : public Error {
 public:
  using Error::Error;
};

class MissingHeader : public Error {
 public:
  using Error::Error;
};

class TooManyParseErrors : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ChecksumMismatch : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ZeroTotal : public Error {
 public:
  using Error::Error;
};

class ExponentTooSmall : public Error {
 public:
  using Error::Error;
};

class InvalidCounts : public Error {
 public:
  using Error::Error;
};

class EmptySelection : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace dxg
