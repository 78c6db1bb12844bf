#pragma once

#include <stdexcept>
#include <string>

namespace retrialcap {

// Invalid model parameters or out-of-range states / levels.
class domain_error : public std::invalid_argument {
public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// State space exceeds the configured size cap.
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// The generator's transition graph is not strongly connected.
class structure_error : public std::runtime_error {
public:
  explicit structure_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure in the stationary solve.
class solver_error : public std::runtime_error {
public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace retrialcap
