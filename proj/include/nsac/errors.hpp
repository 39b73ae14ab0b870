#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsac {

/// Failure codes raised by the library. The CLI maps validation-type codes
/// to exit status 2 and numerical failures to exit status 3.
enum class ErrorCode {
  // input / validation
  InvalidPotential,
  NegativePotential,
  NoHeteroclinic,
  ShapeMismatch,
  DegenerateCurve,
  OutsideTube,
  TubeTooWide,
  NonPeriodicInput,
  ResolutionTooCoarse,
  TubeTooNarrow,
  NoInterface,
  BracketNotVanishing,
  MissingMotion,
  GridMismatch,
  NonPositiveError,
  BadMagic,
  TruncatedFile,
  VersionMismatch,
  BadConfig,
  // numerical
  SingularSystem,
  AmbiguousProjection,
  StepTooLarge,
  CircleVanished,
  CFLViolation,
  ProjectionDiverged,
  NoConvergence,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::NegativePotential: return "NegativePotential";
    case ErrorCode::NoHeteroclinic: return "NoHeteroclinic";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::OutsideTube: return "OutsideTube";
    case ErrorCode::TubeTooWide: return "TubeTooWide";
    case ErrorCode::NonPeriodicInput: return "NonPeriodicInput";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::TubeTooNarrow: return "TubeTooNarrow";
    case ErrorCode::NoInterface: return "NoInterface";
    case ErrorCode::BracketNotVanishing: return "BracketNotVanishing";
    case ErrorCode::MissingMotion: return "MissingMotion";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveError: return "NonPositiveError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::AmbiguousProjection: return "AmbiguousProjection";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::CircleVanished: return "CircleVanished";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::ProjectionDiverged: return "ProjectionDiverged";
    case ErrorCode::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

constexpr bool is_numerical(ErrorCode code) {
  return code >= ErrorCode::SingularSystem;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nsac
