#pragma once

#include <stdexcept>

namespace srw {

// Thrown when a requested table or horizon exceeds the desk-scale guards.
// Callers that map work onto process exit codes treat this as "refused", not
// as a numerical failure.
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srw
