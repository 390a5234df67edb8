#include "qstack/error.hpp"

namespace qstack {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SrcDstMismatch: return "SrcDstMismatch";
    case ErrorKind::CodomainMismatch: return "CodomainMismatch";
    case ErrorKind::SquareNotCommuting: return "SquareNotCommuting";
    case ErrorKind::SrcMismatch: return "SrcMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotCoequalized: return "NotCoequalized";
    case ErrorKind::DanglingArrow: return "DanglingArrow";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::CoverNotInTopology: return "CoverNotInTopology";
    case ErrorKind::CoverNotCanonical: return "CoverNotCanonical";
    case ErrorKind::CocycleRequired: return "CocycleRequired";
    case ErrorKind::OverlapMismatch: return "OverlapMismatch";
    case ErrorKind::NotIso: return "NotIso";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NotAssociative: return "NotAssociative";
    case ViolationKind::NoUnit: return "NoUnit";
    case ViolationKind::NoInverse: return "NoInverse";
    case ViolationKind::AssocFail: return "AssocFail";
    case ViolationKind::UnitFail: return "UnitFail";
    case ViolationKind::EquivarianceFail: return "EquivarianceFail";
    case ViolationKind::NotTrivial: return "NotTrivial";
    case ViolationKind::NotBundle: return "NotBundle";
    case ViolationKind::TriangleFail: return "TriangleFail";
    case ViolationKind::CocycleFail: return "CocycleFail";
    case ViolationKind::OverlapMismatch: return "OverlapMismatch";
    case ViolationKind::NotCanonicalCover: return "NotCanonicalCover";
    case ViolationKind::NotIso: return "NotIso";
    case ViolationKind::NotSheaf: return "NotSheaf";
    case ViolationKind::Mismatch: return "Mismatch";
  }
  return "UnknownViolation";
}

std::string Violation::describe() const {
  std::string out = to_string(kind);
  out += '(';
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ',';
    out += witness[i];
  }
  out += ')';
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace qstack
