#include "rightangle/error.hpp"

namespace rightangle {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::ZeroDegree: return "ZeroDegree";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::IndexSetMismatch: return "IndexSetMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace rightangle
