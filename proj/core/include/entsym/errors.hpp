#pragma once

#include <stdexcept>
#include <string>

namespace entsym {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct InvalidBipartition : Error { using Error::Error; };
struct InvalidSubsystem : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotFullyEntangled : Error { using Error::Error; };
struct WrongOrientation : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct NonSquare : Error { using Error::Error; };
struct SingularExpansion : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace entsym
