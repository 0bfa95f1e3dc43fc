#pragma once

#include <stdexcept>
#include <string>

namespace edgebrane {

/// Base class for all geometric and numerical failures raised by the library.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tangent vectors are linearly dependent (bad parametrization, coincident points).
class DegenerateImmersion : public GeometryError {
public:
  using GeometryError::GeometryError;
};

/// Induced metric determinant below tolerance (null or collapsed point).
class DegenerateMetric : public GeometryError {
public:
  using GeometryError::GeometryError;
};

/// Gram-Schmidt could not produce a full normal frame.
class GaugeFailure : public GeometryError {
public:
  using GeometryError::GeometryError;
};

/// Boundary normal cannot be normalized: the edge is tangent to the light cone.
class NullBoundary : public GeometryError {
public:
  using GeometryError::GeometryError;
};

class InvalidParameters : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ConstraintBlowup : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The two ends of an evolving string came within grid resolution of each other.
class EndpointCollision : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgebrane
