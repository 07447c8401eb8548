#include "passgauge/error.hpp"

namespace passgauge {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyDictionary: return "EmptyDictionary";
        case ErrorKind::EmptyCorpus: return "EmptyCorpus";
        case ErrorKind::FileNotFound: return "FileNotFound";
        case ErrorKind::HeaderMismatch: return "HeaderMismatch";
        case ErrorKind::InsufficientClassSize: return "InsufficientClassSize";
        case ErrorKind::DegenerateClass: return "DegenerateClass";
        case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorKind::AllZeroCounts: return "AllZeroCounts";
        case ErrorKind::SingleClassTrainingSet: return "SingleClassTrainingSet";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::InvalidLabel: return "InvalidLabel";
        case ErrorKind::EmptyMatrix: return "EmptyMatrix";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::UnknownSchemaVersion: return "UnknownSchemaVersion";
        case ErrorKind::CorruptArchive: return "CorruptArchive";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace passgauge
