#pragma once

#include <stdexcept>
#include <string>

namespace mmf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mesh-side failures (CLI exit code 3).
struct MeshError : Error {
  using Error::Error;
};
struct SpringNonConvergence : MeshError {
  using MeshError::MeshError;
};
struct DegenerateElement : MeshError {
  using MeshError::MeshError;
};
struct NonConformingEdge : MeshError {
  using MeshError::MeshError;
};
struct MeshFormatError : MeshError {
  using MeshError::MeshError;
};

// Solver failures (CLI exit code 4). `time` is the model time of the failing state.
struct SolverError : Error {
  double time;
  SolverError(const std::string& what, double t) : Error(what), time(t) {}
};
struct NonFiniteState : SolverError {
  using SolverError::SolverError;
};
struct PositivityLoss : SolverError {
  using SolverError::SolverError;
};

// Usage-side failures (CLI exit code 2).
struct UsageError : Error {
  using Error::Error;
};
struct OrderOutOfRange : UsageError {
  using UsageError::UsageError;
};
struct ConfigError : UsageError {
  using UsageError::UsageError;
};
struct SchemaMismatch : UsageError {
  using UsageError::UsageError;
};

struct PoleProximity : Error {
  using Error::Error;
};
struct InvalidField : Error {
  using Error::Error;
};

}  // namespace mmf
