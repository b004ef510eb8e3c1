#pragma once

#include <stdexcept>
#include <string>

namespace dg {

enum class ErrorCode {
    NotATree,
    SiteMissing,
    NotMinusOne,
    DegreeTooHigh,
    NotZeroVertex,
    WrongDegree,
    NotReversible,
    SearchBudgetExceeded,
    LoopsUnsupported,
    InvalidExtendedGraph,
    NoBoundaryNeighbor,
    ZeroPointInStar,
    MissingCoordinates,
    NotAZigzag,
    IndexOutOfRange,
    NoExtremalZero,
    NotRealizable,
    OrderingConflict,
    SlotViolation,
    SyntaxError,
    UnknownReference,
    DuplicateName,
    Validation,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

} // namespace dg
