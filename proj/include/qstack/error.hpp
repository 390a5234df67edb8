#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qstack {

// Precondition failures. These are programming or input errors, never
// "the mathematical check came out false".
enum class ErrorKind {
  SrcDstMismatch,
  CodomainMismatch,
  SquareNotCommuting,
  SrcMismatch,
  ShapeMismatch,
  NotCoequalized,
  DanglingArrow,
  TargetMismatch,
  BoundExceeded,
  BaseMismatch,
  CoverNotInTopology,
  CoverNotCanonical,
  CocycleRequired,
  OverlapMismatch,
  NotIso,
  InvalidInput,
  UnknownCommand,
  SyntaxError,
  UnresolvedReference,
  ValidationError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// A mathematical check that failed, with the atoms that witness it.
enum class ViolationKind {
  NotAssociative,
  NoUnit,
  NoInverse,
  AssocFail,
  UnitFail,
  EquivarianceFail,
  NotTrivial,
  NotBundle,
  TriangleFail,
  CocycleFail,
  OverlapMismatch,
  NotCanonicalCover,
  NotIso,
  NotSheaf,
  Mismatch,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<std::string> witness;
  std::string detail;

  std::string describe() const;
};

// Either a certified value or the violation that prevented certification.
template <class T>
class Outcome {
 public:
  Outcome(T value) : state_(std::move(value)) {}
  Outcome(Violation v) : state_(std::move(v)) {}

  bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw Error(ErrorKind::ValidationError, violation().describe());
    return std::get<0>(state_);
  }
  T&& value() && {
    if (!ok()) throw Error(ErrorKind::ValidationError, violation().describe());
    return std::get<0>(std::move(state_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Violation& violation() const { return std::get<1>(state_); }

 private:
  std::variant<T, Violation> state_;
};

struct Unit {};
using Check = Outcome<Unit>;

inline Check check_ok() { return Check(Unit{}); }

}  // namespace qstack
