#pragma once

#include <stdexcept>
#include <string>

namespace zkpcp {

enum class Errc {
  CompositeModulus,
  ReducibleModulusPolynomial,
  BadSubfieldDegree,
  DivisionByZero,
  NoSubfieldConfigured,
  ArityMismatch,
  PointNotInGrid,
  BadIndex,
  IncompleteTable,
  InconsistentConstraints,
  OutOfDomain,
  BudgetExceeded,
  DuplicateId,
  LengthMismatch,
  SearchSpaceTooLarge,
  FieldTooSmallForK,
  DegreeTooHigh,
  TooManyVariables,
  WidthMismatch,
  WitnessInvalid,
  LocalBudgetExceeded,
  MissingAnswer,
  DistanceTargetUnreachable,
  ProximityExceedsRobustness,
  PreconditionViolated,
  BadConfig,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::CompositeModulus: return "CompositeModulus";
    case Errc::ReducibleModulusPolynomial: return "ReducibleModulusPolynomial";
    case Errc::BadSubfieldDegree: return "BadSubfieldDegree";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NoSubfieldConfigured: return "NoSubfieldConfigured";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::PointNotInGrid: return "PointNotInGrid";
    case Errc::BadIndex: return "BadIndex";
    case Errc::IncompleteTable: return "IncompleteTable";
    case Errc::InconsistentConstraints: return "InconsistentConstraints";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case Errc::FieldTooSmallForK: return "FieldTooSmallForK";
    case Errc::DegreeTooHigh: return "DegreeTooHigh";
    case Errc::TooManyVariables: return "TooManyVariables";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::WitnessInvalid: return "WitnessInvalid";
    case Errc::LocalBudgetExceeded: return "LocalBudgetExceeded";
    case Errc::MissingAnswer: return "MissingAnswer";
    case Errc::DistanceTargetUnreachable: return "DistanceTargetUnreachable";
    case Errc::ProximityExceedsRobustness: return "ProximityExceedsRobustness";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::BadConfig: return "BadConfig";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg = {}) { throw Error(c, msg); }

}  // namespace zkpcp
