// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace pawas {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The 2x2 gain matrix is rank one, so the MIMO branch is undefined.
class SingularChannelError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The M/M/1 queue has arrival rate >= service rate.
class UnstableQueueError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A configuration field violates its invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed scenario text. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The traffic demand cannot be met under the per-RAU power cap.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double shortfall, double first_x, double last_x)
        : Error(what), shortfall_(shortfall), first_x_(first_x), last_x_(last_x) {}

    /// Missing rate integral (bit/Hz) or missing power (linear), depending on the source.
    double shortfall() const noexcept { return shortfall_; }
    double first_position() const noexcept { return first_x_; }
    double last_position() const noexcept { return last_x_; }

private:
    double shortfall_;
    double first_x_;
    double last_x_;
};

/// The waterfilling coefficient search did not converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double eta_low, double eta_high)
        : Error(what), eta_low_(eta_low), eta_high_(eta_high) {}

    double eta_low() const noexcept { return eta_low_; }
    double eta_high() const noexcept { return eta_high_; }

private:
    double eta_low_;
    double eta_high_;
};

}  // namespace pawas
