#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcvs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (bad radius, lens angle, ordering...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GridTooLarge : public Error {
public:
    using Error::Error;
};

class InputTooLarge : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class DegenerateStep : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), m_line(line) {}

    std::size_t line() const { return m_line; }

private:
    std::size_t m_line;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UnknownId : public Error {
public:
    using Error::Error;
};

class IdMismatch : public Error {
public:
    using Error::Error;
};

} // namespace lcvs
