#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zkfaith {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unknown backend, unsupported security level, bad parameter file.
class ConfigError : public Error {
public:
    using Error::Error;
};

// API misuse, e.g. mixing elements from different backends.
class UsageError : public Error {
public:
    using Error::Error;
};

class InvalidLengthError : public Error {
public:
    using Error::Error;
};

class PositionError : public Error {
public:
    using Error::Error;
};

class KeyMismatchError : public Error {
public:
    using Error::Error;
};

// The prover cannot produce a proof because the statement is false.
class CannotSatisfyError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class RedundantPredicateError : public Error {
public:
    using Error::Error;
};

class DegenerateSerialError : public Error {
public:
    using Error::Error;
};

class PolicyError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class VersionError : public Error {
public:
    using Error::Error;
};

// Stored digest does not match the content.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace zkfaith
