#pragma once

#include <stdexcept>
#include <string>

namespace triage {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ingestion / validation
struct IoError : Error { using Error::Error; };
struct MalformedCsv : Error { using Error::Error; };
struct UnknownItem : Error { using Error::Error; };
struct DuplicateCell : Error { using Error::Error; };
struct OutOfRangeScore : Error { using Error::Error; };
struct RubricMismatch : Error { using Error::Error; };
struct UnknownCell : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// Numerics
struct NonFiniteInput : Error { using Error::Error; };
struct DegenerateMatrix : Error { using Error::Error; };
struct CoverageGap : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct DegenerateX : Error { using Error::Error; };

}  // namespace triage
