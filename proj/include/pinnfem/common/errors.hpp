#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace pinnfem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, out-of-domain points, bad sizes.
class InputError : public Error {
public:
    using Error::Error;
};

/// The requested order/dimension/degree combination is not supported.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A file did not match its documented format. The message names the line.
class FormatError : public Error {
public:
    FormatError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

class MeshError : public Error {
public:
    using Error::Error;
};

/// Linear solve failed; carries the relative residual that was achieved.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (relative residual " + format(residual) + ")"), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    static std::string format(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }
    double residual_;
};

/// Multiplier of the multiplicative space comes too close to zero.
class ShiftError : public Error {
public:
    using Error::Error;
};

/// Non-finite values produced while evaluating a network or field.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingDivergence : public Error {
public:
    TrainingDivergence(const std::string& what, long epoch, double residual, double boundary, double ritz)
        : Error(what), epoch_(epoch), residual_(residual), boundary_(boundary), ritz_(ritz) {}
    [[nodiscard]] long epoch() const noexcept { return epoch_; }
    [[nodiscard]] double residual_loss() const noexcept { return residual_; }
    [[nodiscard]] double boundary_loss() const noexcept { return boundary_; }
    [[nodiscard]] double ritz_loss() const noexcept { return ritz_; }

private:
    long epoch_;
    double residual_, boundary_, ritz_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pinnfem
