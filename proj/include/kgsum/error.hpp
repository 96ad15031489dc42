#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgsum {

// Machine-readable failure categories. The CLI maps IoError/ParseError to
// exit code 1 (bad or unreadable input files) and everything else to exit
// code 2 (domain errors on well-formed input).
enum class ErrorCode {
    IoError,
    ParseError,
    InvalidRecord,
    InvalidConfig,
    UnknownNode,
    UnknownEdge,
    DuplicateRating,
    FutureTimestamp,
    InvalidPath,
    EmptyScenario,
    DegenerateTerminals,
    DisconnectedTerminals,
    NoEdges,
    OracleTooLarge,
    EmptyExplanation,
    SeriesTooShort,
    InfeasibleSpec,
    IsolatedUser,
    InsufficientPopulation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message, long line = -1)
        : std::runtime_error(format(code, message, line)), code_(code), line_(line) {}

    ErrorCode code() const { return code_; }

    // 1-based line number of the offending input record, or -1 when not tied
    // to a specific line.
    long line() const { return line_; }

    bool is_io() const { return code_ == ErrorCode::IoError || code_ == ErrorCode::ParseError; }

  private:
    static std::string format(ErrorCode code, const std::string& message, long line);

    ErrorCode code_;
    long line_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message, long line = -1) {
    throw Error(code, std::move(message), line);
}

}  // namespace kgsum
