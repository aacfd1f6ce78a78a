#pragma once

#include <stdexcept>
#include <string>

namespace ntos {

// A caller violated a documented precondition (bad argument, table too small,
// non-squarefree k where squarefree is required, ...).
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// The request is valid but exceeds a configured budget (memory, operation
// pairs, divisor count).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric argument outside the mathematical domain of the function.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ntos
