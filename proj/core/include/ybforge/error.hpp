#pragma once

#include <stdexcept>
#include <string>

namespace ybforge {

enum class ErrorKind {
    DivisionByZero,
    PoleAtPoint,
    MissingAssignment,
    EssentialSingularity,
    ParseError,
    NonIntegralExponent,
    NonIntegerRatio,
    MalformedGCM,
    NoIntegerK,
    NotAffine,
    InvalidSpec,
    UnknownGenerator,
    UnsupportedElement,
    LegMismatch,
    InconsistentSystem,
    UnderdeterminedSystem,
    IncompatiblePair,
    InvalidTau,
    NotInvertible,
    NoHighestRoot,
    DimensionMismatch,
    MissingImage,
    IntertwinerNotUnique,
    NoSolution,
    PoleAtOne,
    PoleAtRootOfUnity,
    SpectralClash,
    InvalidTriple,
    ExceptionalCase,
    ConvergenceFailure,
    SpecMismatch,
    EpsilonOutOfDisc,
    NonConvergent,
    InvalidArgument,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace ybforge
