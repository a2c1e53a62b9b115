#pragma once

#include <stdexcept>
#include <string>

namespace termweaver {

// Exit-code mapping used by the CLI:
//   usage errors        -> 1 (handled by the argument parser)
//   DataError family    -> 2
//   TransportError family -> 3
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : DataError {
  using DataError::DataError;
};

struct ValidationError : DataError {
  using DataError::DataError;
};

struct FormatError : DataError {
  FormatError(const std::string& msg, std::size_t line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_no(line) {}
  std::size_t line_no;
};

struct DuplicateSourceError : DataError {
  explicit DuplicateSourceError(const std::string& term)
      : DataError("duplicate source term: " + term), term(term) {}
  std::string term;
};

struct TemplateError : DataError {
  using DataError::DataError;
};

struct NoMappingFound : DataError {
  NoMappingFound() : DataError("no {...} mapping found in response") {}
};

struct MalformedPair : DataError {
  MalformedPair(const std::string& msg, std::size_t pos)
      : DataError(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

struct LengthMismatch : DataError {
  LengthMismatch(std::size_t a, std::size_t b)
      : DataError("corpus length mismatch: " + std::to_string(a) + " vs " +
                  std::to_string(b)) {}
};

struct EmptyCorpus : DataError {
  EmptyCorpus() : DataError("empty corpus") {}
};

struct CorpusMismatch : DataError {
  using DataError::DataError;
};

struct EmptyOutput : DataError {
  EmptyOutput() : DataError("model output empty after post-processing") {}
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AuthError : TransportError {
  using TransportError::TransportError;
};

struct RateLimited : TransportError {
  using TransportError::TransportError;
};

struct MalformedResponse : TransportError {
  using TransportError::TransportError;
};

}  // namespace termweaver
