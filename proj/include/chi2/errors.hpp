#pragma once

#include <stdexcept>
#include <string>

namespace chi2 {

/// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
    configuration,
    solver,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Invalid parameters, grids, flags or option combinations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what)
        : Error(ErrorKind::configuration, what) {}
};

/// Vector lengths that do not agree with the grid.
class DimensionError : public ConfigError {
public:
    explicit DimensionError(const std::string& what) : ConfigError(what) {}
};

/// Arguments outside the admissible interval.
class DomainError : public ConfigError {
public:
    explicit DomainError(const std::string& what) : ConfigError(what) {}
};

/// Bounds M = M* = 0 leave the existence bound undefined.
class DegenerateBoundsError : public ConfigError {
public:
    explicit DegenerateBoundsError(const std::string& what) : ConfigError(what) {}
};

/// Base for iteration and matching failures.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(ErrorKind::solver, what) {}
};

/// The order-1 matching equations have no real nontrivial root.
class NoRealSolutionError : public SolverError {
public:
    NoRealSolutionError(const std::string& what, double radicand)
        : SolverError(what), radicand_(radicand) {}

    double radicand() const noexcept { return radicand_; }

private:
    double radicand_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class ParseError : public IoError {
public:
    ParseError(const std::string& what, std::size_t line)
        : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::configuration: return 2;
    case ErrorKind::solver: return 3;
    case ErrorKind::io: return 4;
    }
    return 1;
}

} // namespace chi2
