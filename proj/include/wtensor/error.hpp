#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wtensor {

enum class ErrorCode {
  InvalidIndex,
  DuplicateEntry,
  OrderMismatch,
  DimMismatch,
  InvalidArgument,
  ParseError,
  // w-structure
  OverlapTooLarge,
  CoverageGap,
  SumMismatch,
  BlockNotW,
  InvalidDecomposition,
  WeightSumMismatch,
  // hypergraph
  InvalidHypergraph,
  NotATree,
  UnsupportedTopology,
  // eigen-sos
  OddOrder,
  NoDecomposition,
  SolverFailure,
  ExponentSumOdd,
  NotSingleTerm,
  // baselines / copositivity
  NegativeCoefficient,
  DimensionMismatch,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wtensor
