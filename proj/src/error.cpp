#include "wtensor/error.hpp"

namespace wtensor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OverlapTooLarge: return "OverlapTooLarge";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::SumMismatch: return "SumMismatch";
    case ErrorCode::BlockNotW: return "BlockNotW";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::InvalidHypergraph: return "InvalidHypergraph";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::OddOrder: return "OddOrder";
    case ErrorCode::NoDecomposition: return "NoDecomposition";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::ExponentSumOdd: return "ExponentSumOdd";
    case ErrorCode::NotSingleTerm: return "NotSingleTerm";
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

}  // namespace wtensor
