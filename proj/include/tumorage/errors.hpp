#pragma once

#include <stdexcept>
#include <string>

namespace tumorage {

// Invalid argument value (non-positive size, probability outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Too few samples on one side of zero to fit a mixture branch.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Growth step produced a non-finite or non-positive volume.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Query outside the range covered by an age table.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tumorage
