#pragma once

#include <stdexcept>
#include <string>

namespace patchdct {

// Base of every error raised by the library. The CLI maps InputError and its
// subclasses to exit code 1 and InvariantError to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

// A requested length (vector dimension, scan length) is out of range.
class LengthError : public InputError {
public:
    using InputError::InputError;
};

// Incompatible configuration, e.g. a patch size that does not divide K.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

// An operation that only applies to one patch class was handed another.
class ClassError : public InputError {
public:
    using InputError::InputError;
};

// Caller broke a documented pairing (e.g. class/vector presence mismatch).
class ContractError : public InputError {
public:
    using InputError::InputError;
};

// Malformed document; the message carries the byte offset when known.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

// Internal consistency check failed. Indicates a bug, not bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace patchdct
