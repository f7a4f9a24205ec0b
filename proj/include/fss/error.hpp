#pragma once

#include <stdexcept>
#include <string>

namespace fss {

// Base for everything the library throws. The CLI maps InputError to exit
// code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, configuration, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

// A well-formed request that cannot be evaluated (missing field mean,
// zero labor cost, infeasible program, ...).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fss
