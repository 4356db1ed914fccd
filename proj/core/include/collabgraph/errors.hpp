#pragma once

#include <stdexcept>
#include <string>

namespace collab {

// Lookup of a node or graph id that is not present.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller broke a documented precondition (mismatched sizes, bad params).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document is well-formed but internally inconsistent (dangling edges,
// duplicate nodes).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace collab
