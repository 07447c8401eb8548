#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace passgauge {

enum class ErrorKind {
    EmptyDictionary,
    EmptyCorpus,
    FileNotFound,
    HeaderMismatch,
    InsufficientClassSize,
    DegenerateClass,
    EmptyTrainingSet,
    AllZeroCounts,
    SingleClassTrainingSet,
    DimensionMismatch,
    NonFiniteLoss,
    LengthMismatch,
    InvalidLabel,
    EmptyMatrix,
    IoError,
    UnknownSchemaVersion,
    CorruptArchive,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace passgauge
