#pragma once

#include <stdexcept>
#include <string>

namespace plantmarket {

// Invalid parameters, dimensions or configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver could not run or a matrix cell failed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plantmarket
