#include "crtarmor/errors.hpp"

namespace crtarmor {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::NotAscending: return "NotAscending";
        case Errc::NonIntegerGamma: return "NonIntegerGamma";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::DecodeFailure: return "DecodeFailure";
        case Errc::Ambiguous: return "Ambiguous";
        case Errc::LambdaTooLarge: return "LambdaTooLarge";
        case Errc::RangeTooLarge: return "RangeTooLarge";
        case Errc::NoSolution: return "NoSolution";
        case Errc::CombinatorialBlowup: return "CombinatorialBlowup";
        case Errc::NoGap: return "NoGap";
        case Errc::NonIntegralQuotient: return "NonIntegralQuotient";
        case Errc::TooFewSurvivors: return "TooFewSurvivors";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::EmptyScriptN: return "EmptyScriptN";
        case Errc::AmbiguousReconstruction: return "AmbiguousReconstruction";
        case Errc::PeakCountMismatch: return "PeakCountMismatch";
        case Errc::Overflow: return "Overflow";
    }
    return "UnknownError";
}

}  // namespace crtarmor
