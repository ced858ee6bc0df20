#pragma once

#include <stdexcept>
#include <string>

namespace symdim {

enum class ErrorKind {
  InvalidSpec,
  EmptyLanguage,
  HypothesisViolated,
  ConstructionFailed,
  DepthInsufficient,
  NotSurjective,
  PeriodicWitness,
  HeightMismatch,
  WindowTooSmall,
  NTooSmall,
  TailMassTooLarge,
  MissingEquivarianceCertificate,
  Config,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::EmptyLanguage: return "EmptyLanguage";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::DepthInsufficient: return "DepthInsufficient";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::PeriodicWitness: return "PeriodicWitness";
    case ErrorKind::HeightMismatch: return "HeightMismatch";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NTooSmall: return "NTooSmall";
    case ErrorKind::TailMassTooLarge: return "TailMassTooLarge";
    case ErrorKind::MissingEquivarianceCertificate: return "MissingEquivarianceCertificate";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  // Failures that more depth would cure, as opposed to refutations.
  bool depth_related() const noexcept {
    return kind_ == ErrorKind::DepthInsufficient || kind_ == ErrorKind::ConstructionFailed;
  }

 private:
  ErrorKind kind_;
};

}  // namespace symdim
