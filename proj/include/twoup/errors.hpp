#pragma once

#include <stdexcept>
#include <string>

namespace twoup {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (bracket lists, decimal numerals, b-files).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A structural claim about the sequence failed while generating or
// evaluating.  These are findings, not bugs in the caller: the engines
// are built to detect them rather than assume they cannot happen.
class FalsificationError : public Error {
 public:
  explicit FalsificationError(const std::string& msg) : Error(msg) {}
};

// More than three exponents would be free at once.
class FreeSetOverflow : public FalsificationError {
 public:
  explicit FreeSetOverflow(const std::string& msg) : FalsificationError(msg) {}
};

// The event stream does not match any atom code.
class CodeMismatch : public FalsificationError {
 public:
  explicit CodeMismatch(const std::string& msg) : FalsificationError(msg) {}
};

// The observed atom type word diverges from the expected word.
class StructureMismatch : public FalsificationError {
 public:
  explicit StructureMismatch(const std::string& msg) : FalsificationError(msg) {}
};

// Local doubling produced output that does not end on an atom boundary.
class FragmentError : public Error {
 public:
  FragmentError(const std::string& msg, std::size_t complete_atoms,
                std::size_t fragment_terms)
      : Error(msg),
        complete_atoms(complete_atoms),
        fragment_terms(fragment_terms) {}
  std::size_t complete_atoms = 0;
  std::size_t fragment_terms = 0;
};

// A W-atom ancestor resolved to something other than a weight-2 term
// with the predicted top exponent.
class RecursionFault : public FalsificationError {
 public:
  explicit RecursionFault(const std::string& msg) : FalsificationError(msg) {}
};

// An atom id outside the domain of the closed-form tables.
class InvalidAtomId : public Error {
 public:
  explicit InvalidAtomId(const std::string& msg) : Error(msg) {}
};

// A generating-function coefficient fell outside {0, 1}.
class CoefficientAnomaly : public FalsificationError {
 public:
  explicit CoefficientAnomaly(const std::string& msg)
      : FalsificationError(msg) {}
};

}  // namespace twoup
