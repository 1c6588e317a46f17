#pragma once

#include <stdexcept>
#include <string>

namespace dyncolor {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition on an argument violated (sizes, ranges, empty inputs).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input could not be parsed; the message carries the offending position or path.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a data invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A feasible range produced no sample at all for a class.
class RangeTooSmallError : public Error {
public:
    RangeTooSmallError(std::string class_id, const std::string& what)
        : Error(what), class_id_(std::move(class_id)) {}

    const std::string& class_id() const noexcept { return class_id_; }

private:
    std::string class_id_;
};

} // namespace dyncolor
