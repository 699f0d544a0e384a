#pragma once

#include <stdexcept>
#include <string>

namespace confham {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An interface point does not land on a grid node.
struct AlignmentError : Error {
  using Error::Error;
};

/// A subgrid would end up with too few nodes for the one-sided stencils.
struct ResolutionError : Error {
  using Error::Error;
};

/// Mismatched decompositions or vector lengths.
struct ShapeError : Error {
  using Error::Error;
};

/// Invalid parameter value (empty interval, beta = 0, non-real potential, ...).
struct SpecError : Error {
  using Error::Error;
};

/// Malformed configuration document; message carries the offending field path.
struct ConfigError : Error {
  using Error::Error;
};

/// A numerical backend failed (eigensolver did not converge, singular solve).
struct SolverError : Error {
  using Error::Error;
};

}  // namespace confham
