#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmove {

/// Error categories surfaced by the library. The CLI maps them to exit codes.
enum class ErrorKind {
    ComponentContainsSeparator,
    EmptyComponent,
    InvalidConfig,
    SyntaxError,
    DuplicateClass,
    DuplicateMethodSignature,
    MalformedRecord,
    DanglingReference,
    MixedModes,
    NotAMethodAst,
    EmptyWalkCorpus,
    DimNotDivisible,
    DimTooLarge,
    EmptyCorpus,
    EmptyInput,
    MissingEmbedding,
    MissingHybrid,
    SingleClassInput,
    DimensionMismatch,
    TooFewSamplesForFolds,
    SpecInfeasible,
    BadFormat,
    Io,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::ComponentContainsSeparator: return "ComponentContainsSeparator";
    case ErrorKind::EmptyComponent: return "EmptyComponent";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateClass: return "DuplicateClass";
    case ErrorKind::DuplicateMethodSignature: return "DuplicateMethodSignature";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::MixedModes: return "MixedModes";
    case ErrorKind::NotAMethodAst: return "NotAMethodAst";
    case ErrorKind::EmptyWalkCorpus: return "EmptyWalkCorpus";
    case ErrorKind::DimNotDivisible: return "DimNotDivisible";
    case ErrorKind::DimTooLarge: return "DimTooLarge";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MissingEmbedding: return "MissingEmbedding";
    case ErrorKind::MissingHybrid: return "MissingHybrid";
    case ErrorKind::SingleClassInput: return "SingleClassInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooFewSamplesForFolds: return "TooFewSamplesForFolds";
    case ErrorKind::SpecInfeasible: return "SpecInfeasible";
    case ErrorKind::BadFormat: return "BadFormat";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace rmove
