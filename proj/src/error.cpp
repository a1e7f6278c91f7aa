#include "conflictlens/error.hpp"

namespace conflictlens {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::NonFiniteSample: return "NonFiniteSample";
        case Errc::UnknownVariable: return "UnknownVariable";
        case Errc::UnknownSlice: return "UnknownSlice";
        case Errc::SupportNotCovered: return "SupportNotCovered";
        case Errc::MissingKey: return "MissingKey";
        case Errc::NonPositivePeriod: return "NonPositivePeriod";
        case Errc::InconsistentTiming: return "InconsistentTiming";
        case Errc::HoldExceedsPeriod: return "HoldExceedsPeriod";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ConfigMismatch: return "ConfigMismatch";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::EmptyTrace: return "EmptyTrace";
        case Errc::NoWriters: return "NoWriters";
        case Errc::ParseError: return "ParseError";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

bool Error::is_input_error() const noexcept {
    switch (code_) {
        case Errc::UnknownVariable:
        case Errc::UnknownSlice:
        case Errc::MissingKey:
        case Errc::NonPositivePeriod:
        case Errc::InconsistentTiming:
        case Errc::HoldExceedsPeriod:
        case Errc::ConfigMismatch:
        case Errc::InvalidConfig:
        case Errc::ParseError:
        case Errc::NonFiniteSample:
        case Errc::IoError:
            return true;
        default:
            return false;
    }
}

}  // namespace conflictlens
