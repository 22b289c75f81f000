#pragma once

#include <stdexcept>
#include <string>

namespace msnet {

enum class ErrorKind {
  InvalidTopology,
  TensionViolation,
  DegenerateCurve,
  ConnectivityMismatch,
  OpenChainNotClosed,
  UnsupportedSurgery,
  NetworkOutsideDomain,
  OutsideDomain,
  WalkFailure,
  StaleCuts,
  DimensionMismatch,
  NoConvergence,
  NoBracket,
  TopologyMismatch,
  EnergyIncrease,
  FixedPointStall,
  UnknownPreset,
  ParseError,
  ValidationError,
  IOError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidTopology: return "InvalidTopology";
    case ErrorKind::TensionViolation: return "TensionViolation";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::ConnectivityMismatch: return "ConnectivityMismatch";
    case ErrorKind::OpenChainNotClosed: return "OpenChainNotClosed";
    case ErrorKind::UnsupportedSurgery: return "UnsupportedSurgery";
    case ErrorKind::NetworkOutsideDomain: return "NetworkOutsideDomain";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::WalkFailure: return "WalkFailure";
    case ErrorKind::StaleCuts: return "StaleCuts";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::TopologyMismatch: return "TopologyMismatch";
    case ErrorKind::EnergyIncrease: return "EnergyIncrease";
    case ErrorKind::FixedPointStall: return "FixedPointStall";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Error";
}

}  // namespace msnet
