#pragma once

#include <stdexcept>

namespace softsvm {

/// Malformed or unusable input data (bad CSV cells, missing columns, empty files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system could not be factorized even after the jitter floor.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softsvm
