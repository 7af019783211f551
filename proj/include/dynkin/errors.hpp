#pragma once

#include <stdexcept>
#include <string>

namespace dynkin {

// Malformed or inconsistent input data.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (e.g. x outside the interval).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural hypothesis required by the requested operation does not hold.
class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynkin
