#pragma once

#include <stdexcept>
#include <string>

namespace domepilot {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file is missing a required column or is otherwise structurally broken.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Condition string that has no entry in the condition table.
class UnmappedCondition : public Error {
public:
    explicit UnmappedCondition(std::string condition)
        : Error("unmapped condition: \"" + condition + "\""), condition_(std::move(condition)) {}

    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

// Caller violated an operation's precondition (bad arity, empty input, k > n, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Serialized model could not be loaded.
class ModelFormatError : public Error {
public:
    using Error::Error;
};

// Actuator sink refused or failed a write. Retrying the same command is allowed.
class SinkError : public Error {
public:
    using Error::Error;
};

} // namespace domepilot
