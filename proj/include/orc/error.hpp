#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orc {

enum class ErrorKind {
  ParseError,
  InvalidWeight,
  DuplicateEdge,
  SelfLoop,
  VertexOutOfRange,
  NotAnEdge,
  EmptyNeighborhood,
  InfiniteCost,
  InfiniteDistance,
  NotATree,
  NonSquare,
  NotSquare,
  TooLarge,
  MethodMismatch,
  SubnormTooSmall,
  DimMismatch,
  BadFactor,
  SpectrumOutOfRange,
  NotDiagonal,
  BadFactorization,
  InexactEncoding,
  IndexOutOfRange,
  SizeMismatch,
  DimensionCap,
  DigitOutOfRange,
  DegenerateAllZero,
  NoConvergence,
  ZeroOverlap,
  UnknownFixture,
  ConfigError,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

/// Single exception type for the library. The kind is the stable,
/// machine-checkable part; the message carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& detail = {});

}  // namespace orc
