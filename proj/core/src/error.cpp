#include "ybforge/error.hpp"

namespace ybforge {

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::PoleAtPoint: return "PoleAtPoint";
        case ErrorKind::MissingAssignment: return "MissingAssignment";
        case ErrorKind::EssentialSingularity: return "EssentialSingularity";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NonIntegralExponent: return "NonIntegralExponent";
        case ErrorKind::NonIntegerRatio: return "NonIntegerRatio";
        case ErrorKind::MalformedGCM: return "MalformedGCM";
        case ErrorKind::NoIntegerK: return "NoIntegerK";
        case ErrorKind::NotAffine: return "NotAffine";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::UnknownGenerator: return "UnknownGenerator";
        case ErrorKind::UnsupportedElement: return "UnsupportedElement";
        case ErrorKind::LegMismatch: return "LegMismatch";
        case ErrorKind::InconsistentSystem: return "InconsistentSystem";
        case ErrorKind::UnderdeterminedSystem: return "UnderdeterminedSystem";
        case ErrorKind::IncompatiblePair: return "IncompatiblePair";
        case ErrorKind::InvalidTau: return "InvalidTau";
        case ErrorKind::NotInvertible: return "NotInvertible";
        case ErrorKind::NoHighestRoot: return "NoHighestRoot";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::MissingImage: return "MissingImage";
        case ErrorKind::IntertwinerNotUnique: return "IntertwinerNotUnique";
        case ErrorKind::NoSolution: return "NoSolution";
        case ErrorKind::PoleAtOne: return "PoleAtOne";
        case ErrorKind::PoleAtRootOfUnity: return "PoleAtRootOfUnity";
        case ErrorKind::SpectralClash: return "SpectralClash";
        case ErrorKind::InvalidTriple: return "InvalidTriple";
        case ErrorKind::ExceptionalCase: return "ExceptionalCase";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::SpecMismatch: return "SpecMismatch";
        case ErrorKind::EpsilonOutOfDisc: return "EpsilonOutOfDisc";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ybforge
