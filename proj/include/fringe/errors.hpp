#pragma once

#include <stdexcept>
#include <string>

namespace fringe {

// File, parse and configuration failures. The CLI maps these to exit code 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Numerical degeneracy: collapsed point clouds, singular normal matrices,
// non-elliptical fits. The CLI maps these to exit code 3.
class degeneracy_error : public std::runtime_error {
 public:
  explicit degeneracy_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace fringe
