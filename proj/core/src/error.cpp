#include "shiftlab/error.hpp"

namespace shiftlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CycleError: return "CycleError";
    case ErrorCode::DanglingParent: return "DanglingParentError";
    case ErrorCode::EmptyVertexSet: return "EmptyVertexSet";
    case ErrorCode::InvalidVertexId: return "InvalidVertexId";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::VertexCollision: return "VertexCollision";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::NotRootedTree: return "NotRootedTree";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidTail: return "InvalidTail";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::HasLeaf: return "HasLeaf";
    case ErrorCode::NonRationalModulus: return "NonRationalModulus";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::ZeroMeasure: return "ZeroMeasure";
    case ErrorCode::ForklessInput: return "ForklessInput";
    case ErrorCode::RootFork: return "RootFork";
    case ErrorCode::NotSubnormalInput: return "NotSubnormalInput";
    case ErrorCode::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorCode::MemberInfeasible: return "MemberInfeasible";
    case ErrorCode::MemberNotExtendable: return "MemberNotExtendable";
    case ErrorCode::FrontierMismatch: return "FrontierMismatch";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InternalCheckFailed: return "InternalCheckFailed";
  }
  return "Unknown";
}

}  // namespace shiftlab
