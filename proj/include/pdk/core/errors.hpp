#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pdk {

// Error taxonomy shared by the library and the CLI.
//
// Exit-code mapping used by the command-line tool:
//   parameter_error, spec_error, io_error  -> 2  (bad input / configuration)
//   infeasible_error                       -> 3  (no solution exists for the request)
//   numeric_error                          -> 4  (tolerance or convergence failure)
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Invalid argument values (negative rates, empty grids, out-of-range indices...).
class parameter_error : public error {
public:
    explicit parameter_error(const std::string& message)
        : error("parameter", message) {}
};

// Structurally invalid model descriptions (bad topology, inconsistent sizes...).
class spec_error : public error {
public:
    explicit spec_error(const std::string& message)
        : error("spec", message) {}
};

// Well-formed request that provably has no solution.  Carries an optional
// diagnostic location (e.g. the frequency at which a design becomes impossible).
class infeasible_error : public error {
public:
    explicit infeasible_error(const std::string& message)
        : error("infeasible", message) {}
    infeasible_error(const std::string& message, double where)
        : error("infeasible", message), where_(where), has_where_(true) {}

    bool has_location() const noexcept { return has_where_; }
    double location() const noexcept { return where_; }

private:
    double where_ = 0.0;
    bool has_where_ = false;
};

// Numerical failure: non-convergent truncation, insufficient spectral coverage,
// singular linear system, undefined derived quantity.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& message)
        : error("numeric", message) {}
};

// Filesystem / serialization problems.
class io_error : public error {
public:
    explicit io_error(const std::string& message)
        : error("io", message) {}
};

} // namespace pdk
