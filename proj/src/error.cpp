#include "orc/error.hpp"

namespace orc {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidWeight: return "InvalidWeight";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorKind::NotAnEdge: return "NotAnEdge";
    case ErrorKind::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorKind::InfiniteCost: return "InfiniteCost";
    case ErrorKind::InfiniteDistance: return "InfiniteDistance";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::MethodMismatch: return "MethodMismatch";
    case ErrorKind::SubnormTooSmall: return "SubnormTooSmall";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BadFactor: return "BadFactor";
    case ErrorKind::SpectrumOutOfRange: return "SpectrumOutOfRange";
    case ErrorKind::NotDiagonal: return "NotDiagonal";
    case ErrorKind::BadFactorization: return "BadFactorization";
    case ErrorKind::InexactEncoding: return "InexactEncoding";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorKind::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ZeroOverlap: return "ZeroOverlap";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& detail) {
  std::string msg(error_kind_name(kind));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  throw Error(kind, msg);
}

}  // namespace orc
