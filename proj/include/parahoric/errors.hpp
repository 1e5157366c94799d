#pragma once

#include <stdexcept>
#include <string>

namespace parahoric {

// Error taxonomy. Everything thrown by the library derives from AlgError so
// callers (notably the CLI) can map failures onto exit codes uniformly:
// validation of raw input -> ValidationError, broken mathematical contracts
// -> the specific subclass, filesystem trouble -> IOError.
class AlgError : public std::runtime_error {
public:
    explicit AlgError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension / arity / index mismatches and violated structural invariants.
class ShapeError : public AlgError {
public:
    explicit ShapeError(const std::string& what) : AlgError(what) {}
};

// A value that must be invertible in the coefficient ring is not.
class UnitError : public AlgError {
public:
    explicit UnitError(const std::string& what) : AlgError(what) {}
};

// Input violates a normalization convention (e.g. non-monic polynomial where
// a monic one is required).
class ConventionError : public AlgError {
public:
    explicit ConventionError(const std::string& what) : AlgError(what) {}
};

// Factors that must be pairwise coprime are not.
class CoprimalityError : public AlgError {
public:
    explicit CoprimalityError(const std::string& what) : AlgError(what) {}
};

// An iteration that must stabilize failed to do so within its bound.
class ConvergenceError : public AlgError {
public:
    explicit ConvergenceError(const std::string& what) : AlgError(what) {}
};

// The block-splitting linear system is inconsistent: the input data does not
// come from a representation with coprime block spectra.
class NoSplitError : public AlgError {
public:
    explicit NoSplitError(const std::string& what) : AlgError(what) {}
};

// An expected exact divisibility of polynomials fails.
class FactorError : public AlgError {
public:
    explicit FactorError(const std::string& what) : AlgError(what) {}
};

// Exponent ranges, iteration caps and similar hard limits.
class LimitError : public AlgError {
public:
    explicit LimitError(const std::string& what) : AlgError(what) {}
};

// Bad user input (CLI flag parsing, malformed JSON payloads).
class ValidationError : public AlgError {
public:
    explicit ValidationError(const std::string& what) : AlgError(what) {}
};

// Filesystem / stream failures.
class IOError : public AlgError {
public:
    explicit IOError(const std::string& what) : AlgError(what) {}
};

// "Cannot happen" guards; reaching one is a bug in this library.
class InternalError : public AlgError {
public:
    explicit InternalError(const std::string& what) : AlgError(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ShapeError(what);
}

} // namespace parahoric
