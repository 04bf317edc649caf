#pragma once

#include <stdexcept>
#include <string>

namespace cuspresp {

/// Thrown when an iterative solver (power iteration, Neumann series, ...)
/// exhausts its budget without reaching the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Thrown when a report file cannot be written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cuspresp
