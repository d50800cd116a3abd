#pragma once

#include <stdexcept>
#include <string>

namespace structinfo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed fine but violates a domain invariant (self-loop, disconnected
/// graph, stale tree, duplicate id, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to run past its configured size limit.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace structinfo
