#pragma once

#include <stdexcept>
#include <string>

namespace lexlda {

// Raised for invalid input data, violated preconditions and I/O failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexlda
