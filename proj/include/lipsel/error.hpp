#pragma once

#include <stdexcept>
#include <string>

namespace lipsel {

// Invalid user input or a violated operation precondition. The CLI maps this
// to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configurable resource bound (projection halfspace cap, subset enumeration
// cap) was exceeded. The CLI maps this to exit code 3.
struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lipsel
