#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace biortho {

enum class ErrorKind {
  GridMismatch,
  DegenerateAtom,
  ParseError,
  UnknownAtom,
  LastAtom,
  DuplicateAtom,
  LinearlyDependent,
  IllConditioned,
  SingularGram,
  InvalidArgument,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DegenerateAtom: return "DegenerateAtom";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownAtom: return "UnknownAtom";
    case ErrorKind::LastAtom: return "LastAtom";
    case ErrorKind::DuplicateAtom: return "DuplicateAtom";
    case ErrorKind::LinearlyDependent: return "LinearlyDependent";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// Failures caused by the numbers themselves rather than by malformed input.
inline bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::LinearlyDependent || kind == ErrorKind::SingularGram ||
         kind == ErrorKind::IllConditioned || kind == ErrorKind::DegenerateAtom;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindedError : public Error {
 public:
  explicit KindedError(const std::string& message) : Error(K, message) {}
};

using GridMismatch = KindedError<ErrorKind::GridMismatch>;
using DegenerateAtom = KindedError<ErrorKind::DegenerateAtom>;
using ParseError = KindedError<ErrorKind::ParseError>;
using UnknownAtom = KindedError<ErrorKind::UnknownAtom>;
using LastAtom = KindedError<ErrorKind::LastAtom>;
using DuplicateAtom = KindedError<ErrorKind::DuplicateAtom>;
using LinearlyDependent = KindedError<ErrorKind::LinearlyDependent>;
using IllConditioned = KindedError<ErrorKind::IllConditioned>;
using SingularGram = KindedError<ErrorKind::SingularGram>;
using InvalidArgument = KindedError<ErrorKind::InvalidArgument>;
using IoError = KindedError<ErrorKind::Io>;

}  // namespace biortho
