#pragma once

#include <stdexcept>
#include <string>

namespace sofsim {

// Thrown when an enumeration or ball would exceed its configured cap.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sofsim
