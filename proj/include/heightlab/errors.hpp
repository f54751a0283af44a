#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heightlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input supplied by the caller (maps to a usage error in the CLI).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidPoint : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// log|0| and friends.
class UndefinedLog : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DegenerateMap : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ShapeError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
public:
    ParseError(const std::string& message, std::size_t position)
        : InvalidArgument(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A numerical procedure did not converge (maps to exit code 1 in the CLI).
class ComputationError : public Error {
public:
    using Error::Error;
};

} // namespace heightlab
