#pragma once

#include <stdexcept>

namespace plsys {

/// Raised for every contract violation inside the library. The message is
/// meant to be shown to a user verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plsys
