#pragma once

#include <stdexcept>
#include <string>

namespace conflictlens {

enum class Errc {
    EmptyInput,
    NonFiniteSample,
    UnknownVariable,
    UnknownSlice,
    SupportNotCovered,
    MissingKey,
    NonPositivePeriod,
    InconsistentTiming,
    HoldExceedsPeriod,
    LengthMismatch,
    ConfigMismatch,
    InvalidConfig,
    EmptyTrace,
    NoWriters,
    ParseError,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    // true for malformed input/config, false for internal failures
    bool is_input_error() const noexcept;

private:
    Errc code_;
};

}  // namespace conflictlens
