// error.hpp : error taxonomy shared by the library and the CLI exit-code map
#pragma once

#include <stdexcept>
#include <string>

namespace quest {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
struct IoError : Error {
    using Error::Error;
};

// Recognized image format with malformed content.
struct DecodeError : Error {
    using Error::Error;
};

// Input is not one of the supported formats.
struct UnsupportedFormatError : Error {
    using Error::Error;
};

// A rectangle or index falls outside its container.
struct RangeError : Error {
    using Error::Error;
};

// An image, code map or sample set is too small for the requested operation.
struct SizeError : Error {
    using Error::Error;
};

// A value violates an operation precondition (zero dimension, empty set, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Text input that cannot be parsed at all; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Parsed input missing required fields or with wrongly typed ones.
struct SchemaError : Error {
    using Error::Error;
};

// Run parameters inconsistent with the data (folds vs subjects, one class, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Feature dimension mismatch between model and input.
struct ShapeError : Error {
    using Error::Error;
};

}  // namespace quest
