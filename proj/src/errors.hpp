#pragma once

#include <stdexcept>
#include <string>

namespace coheat {

// Status codes shared with the C API. The nonzero values double as CLI exit
// code classes, except `argument` which the CLI reports as a validation failure.
enum class Status : int {
    ok = 0,
    internal = 1,
    parse = 2,
    validation = 3,
    convergence = 4,
    resource = 5,
    numerical = 6,
    argument = 7,
};

class Error : public std::runtime_error {
public:
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status_(s) {}
    Status status() const { return status_; }

private:
    Status status_;
};

struct ArgumentError : Error {
    explicit ArgumentError(const std::string& msg) : Error(Status::argument, msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(Status::validation, msg) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(Status::convergence, msg) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error(Status::resource, msg) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(Status::numerical, msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(Status::parse, msg) {}
};

}  // namespace coheat
