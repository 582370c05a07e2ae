#pragma once

#include <stdexcept>
#include <string>

namespace handsynth {

// File/record format violations (bad schema version, malformed lines, ...).
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Rejection-sampling retry cap exceeded.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

// Requested color lies outside the representable sRGB gamut.
class OutOfGamutError : public std::runtime_error {
 public:
  explicit OutOfGamutError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace handsynth
