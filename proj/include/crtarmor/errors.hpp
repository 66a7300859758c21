#pragma once

#include <stdexcept>
#include <string>

namespace crtarmor {

// Every failure mode the library reports. CLI maps these onto exit codes.
enum class Errc {
    NotCoprime,
    NotAscending,
    NonIntegerGamma,
    InvalidArgument,
    OutOfRange,
    DecodeFailure,
    Ambiguous,
    LambdaTooLarge,
    RangeTooLarge,
    NoSolution,
    CombinatorialBlowup,
    NoGap,
    NonIntegralQuotient,
    TooFewSurvivors,
    EmptyInput,
    EmptyScriptN,
    AmbiguousReconstruction,
    PeakCountMismatch,
    Overflow,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace crtarmor
