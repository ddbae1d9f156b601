#pragma once

#include <stdexcept>
#include <string>

namespace msflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (PGM headers, key=value files, CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read completely, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Arguments outside an operation's valid domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Confidence-model fit could not be carried out.
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace msflow
