#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxtrust {

// Base for all library errors so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand dimensions do not fit the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but outside an operation's mathematical domain
// (reducible where irreducible is required, irregular matrix, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// An iterative method hit its cap. `trajectory` holds the iterates that were
// kept for diagnosis (the last two for Eigentrust, the whole history for the
// max-plus power method).
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<std::vector<double>> trajectory)
        : Error(what), trajectory_(std::move(trajectory)) {}

    const std::vector<std::vector<double>>& trajectory() const { return trajectory_; }

private:
    std::vector<std::vector<double>> trajectory_;
};

// The matrix has no strictly dominant eigenvalue, so power iteration cannot
// be trusted to produce a start-independent answer.
class DominanceFailure : public Error {
public:
    DominanceFailure(const std::string& what, double lambda1, double lambda2)
        : Error(what), lambda1_(lambda1), lambda2_(lambda2) {}

    double lambda1() const { return lambda1_; }
    double lambda2() const { return lambda2_; }

private:
    double lambda1_;
    double lambda2_;
};

// Text input could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace maxtrust
