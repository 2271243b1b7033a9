#pragma once

#include <stdexcept>
#include <string>

namespace schirn {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A kernel could not produce a trustworthy result (non-convergence,
// factorization failure, non-finite values). CLI exit code 1.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed input: bad files, dimension mismatches, invalid parameters,
// violated preconditions. CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace schirn
