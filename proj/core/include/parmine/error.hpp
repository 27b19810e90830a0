#pragma once

#include <stdexcept>
#include <string>

namespace parmine {

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parmine
