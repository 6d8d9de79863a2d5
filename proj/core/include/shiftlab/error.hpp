#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftlab {

enum class ErrorCode {
  // structural (forest) errors
  CycleError,
  DanglingParent,
  EmptyVertexSet,
  InvalidVertexId,
  UnknownVertex,
  VertexCollision,
  EmptyFamily,
  NotRootedTree,
  NotATree,
  // shift construction / preconditions
  InvalidWeights,
  InvalidTail,
  NotProper,
  HasLeaf,
  NonRationalModulus,
  // moments
  InvalidMeasure,
  ZeroMeasure,
  // hypo
  ForklessInput,
  RootFork,
  // subnormal / extensions
  NotSubnormalInput,
  ScaleOutOfRange,
  MemberInfeasible,
  MemberNotExtendable,
  FrontierMismatch,
  Infeasible,
  // I/O
  ParseError,
  InvalidArgument,
  // a constructed object failed its own certification
  InternalCheckFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library. `witness` carries vertex ids or
// member indices that identify where the failure was detected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> witness = {})
      : std::runtime_error(message), code_(code), witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::vector<std::string> witness_;
};

}  // namespace shiftlab
