#pragma once

#include <stdexcept>
#include <string>

namespace bphi {

// Argument outside its documented range (bad r, bad label, ...).
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Point outside the domain of an evaluation (|z| >= 1 for a function
// singular on the circle, t outside (0,1], ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Non-finite value met during quadrature or search.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature failed to converge (integrand looks divergent).
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Too few usable data points for a least-squares fit.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bphi
