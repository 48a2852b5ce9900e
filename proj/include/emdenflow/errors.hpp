#pragma once

#include <stdexcept>
#include <string>

namespace emdenflow {

/// Thrown when an iterative scheme exhausts its budget without meeting its
/// tolerance, or when a runtime sign/bracket sanity check fails.
class convergence_error : public std::runtime_error {
public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace emdenflow
