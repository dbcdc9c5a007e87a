#pragma once

#include <stdexcept>

namespace planq {

/// Bad configuration or data file contents (templates, generation config).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace planq
