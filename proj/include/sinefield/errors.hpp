#pragma once

#include <stdexcept>
#include <string>

namespace sf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values or domain violations (empty ranges, out-of-range inputs).
struct InvalidArgument : Error {
  using Error::Error;
};

// Dimension mismatches between matrices, vectors or layer chains.
struct ShapeError : Error {
  using Error::Error;
};

// Malformed file contents (PGM, WAV, checkpoints); message carries the offset
// or field that failed.
struct FormatError : Error {
  using Error::Error;
};

// Config-file syntax or validation problems. CLI maps these to exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

// Non-finite loss during training; remembers the offending step.
struct DivergenceError : Error {
  DivergenceError(const std::string& msg, long at_step) : Error(msg), step(at_step) {}
  long step;
};

// Desk-scale guards (e.g. kernel size limits).
struct ResourceError : Error {
  using Error::Error;
};

// Filesystem failures. CLI maps these to exit code 3.
struct IoError : Error {
  using Error::Error;
};

}  // namespace sf
