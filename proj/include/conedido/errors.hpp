#pragma once

#include <stdexcept>
#include <string>

namespace conedido {

// Argument outside the mathematical domain of an operation (negative radius, q > 2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input violates a documented precondition (monotonicity, ellipticity, constraint).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed: singular system, no convergence, budget exceeded.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace conedido
