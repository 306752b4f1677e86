#pragma once

#include <stdexcept>
#include <string>

namespace hsan {

// Malformed or inconsistent dataset files. Messages carry file and line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid hyperparameters or CLI combinations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degenerate embeddings, non-finite losses or gradients.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsan
