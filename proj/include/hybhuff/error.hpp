#pragma once

#include <stdexcept>
#include <string>

namespace hybhuff {

// Every failure raised by the library derives from Error and carries a
// category.
enum class ErrorKind {
  Format,       // malformed text/binary input
  Structure,    // offsets not monotone, count mismatch
  Range,        // ID or value outside its domain
  Consistency,  // incidence duality violated
  Generation,   // infeasible generator parameters
  Domain,       // argument outside the function's domain
  Model,        // cost model assumptions violated
  Fit,          // regression design matrix is singular
  Decode,       // corrupt or truncated archive / bitstream
  Internal,     // invariant that should be unreachable
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Decode failures name the archive segment in which they were detected.
class DecodeError : public Error {
 public:
  DecodeError(std::string segment, const std::string& what)
      : Error(ErrorKind::Decode, segment + ": " + what), segment_(std::move(segment)) {}

  const std::string& segment() const noexcept { return segment_; }

 private:
  std::string segment_;
};

}  // namespace hybhuff
