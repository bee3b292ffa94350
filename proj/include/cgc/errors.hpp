#pragma once

#include <stdexcept>
#include <string>

namespace cgc {

// Invalid or inconsistent input: malformed files, violated preconditions,
// impossible configurations. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// An estimator left its domain: a zero Gini mean difference (all
// observations of a group identical) or a vanishing variance estimate
// (exact dependence between the two groups). The CLI maps this to exit
// code 3.
class DegenerateError : public std::runtime_error {
public:
  explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

// A Monte Carlo replicate could not be completed (for example, the resample
// or redraw retry cap was exhausted). The CLI maps this to exit code 4.
class ReplicateAbort : public std::runtime_error {
public:
  explicit ReplicateAbort(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cgc
