#pragma once

#include <stdexcept>
#include <string>

namespace iet {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller handed in data that violates an operation's precondition
/// (non-positive length, non-bijective row, point outside the domain, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// The computation contradicted a structural invariant of the construction
/// (audit failure, tie in Rauzy induction, hat-lemma mismatch, cap exceeded).
/// These indicate a logic bug or an unusable configuration, never bad luck.
struct DiagnosticError : Error {
  using Error::Error;
};

/// Serialized input could not be decoded.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace iet
