#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advspan {

enum class Errc {
  NonHermitian,
  DimensionMismatch,
  NotPSD,
  NotUnitary,
  BadSpec,
  IndexOutOfRange,
  ArityTooLarge,
  FormulaMismatch,
  ConstantFunction,
  NoConvergence,
  DegenerateDual,
  ZeroMatrix,
  PatternViolation,
  GramFailure,
  WitnessViolation,
  DecompositionFailure,
  WrongBranch,
  NoNullWitness,
  AlgorithmTooWeak,
  NotNormalized,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::BadSpec: return "BadSpec";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ArityTooLarge: return "ArityTooLarge";
    case Errc::FormulaMismatch: return "FormulaMismatch";
    case Errc::ConstantFunction: return "ConstantFunction";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DegenerateDual: return "DegenerateDual";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::PatternViolation: return "PatternViolation";
    case Errc::GramFailure: return "GramFailure";
    case Errc::WitnessViolation: return "WitnessViolation";
    case Errc::DecompositionFailure: return "DecompositionFailure";
    case Errc::WrongBranch: return "WrongBranch";
    case Errc::NoNullWitness: return "NoNullWitness";
    case Errc::AlgorithmTooWeak: return "AlgorithmTooWeak";
    case Errc::NotNormalized: return "NotNormalized";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace advspan
