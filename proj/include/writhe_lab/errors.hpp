#pragma once

#include <stdexcept>
#include <string>

namespace writhe_lab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A constructor or generator argument violates its precondition.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// A curve acquired (or would acquire) a zero-length edge.
class DegenerateEdgeError : public Error {
public:
    using Error::Error;
};

/// Geometry too degenerate for a kernel: transversally intersecting segments,
/// self-intersecting curves, vanishing pushoff separation, and similar.
class GeometricDegeneracyError : public Error {
public:
    using Error::Error;
};

/// A projection direction failed the genericity test. The message names the
/// offending feature (edge, crossing, ...); callers retry with a perturbed
/// direction.
class DegenerateDirectionError : public Error {
public:
    using Error::Error;
};

/// Two curves required to be disjoint intersect or touch non-trivially.
class DisjointnessError : public Error {
public:
    using Error::Error;
};

/// Random generation exhausted its rejection budget.
class GenerationFailureError : public Error {
public:
    using Error::Error;
};

/// Parallel transport across a 180-degree turn of the tangent.
class IllDefinedTransportError : public Error {
public:
    using Error::Error;
};

/// A framing increment of exactly a half turn; the twist sign is ambiguous
/// and finer sampling is required.
class AmbiguousTwistError : public Error {
public:
    using Error::Error;
};

/// Reconnection site edges fail the equal-length / anti-parallel hypothesis.
class NotAntiParallelError : public Error {
public:
    using Error::Error;
};

/// The alignment sweep would drag one polygon through the other.
class PathObstructionError : public Error {
public:
    using Error::Error;
};

/// An operation was applied to an object not in the required state
/// (e.g. theta construction on non-coincident edges).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Self-reconnection site edges are not coincident within tolerance.
class NotJuxtaposedError : public Error {
public:
    using Error::Error;
};

/// A split would produce a component with fewer than 3 vertices.
class DegenerateSplitError : public Error {
public:
    using Error::Error;
};

/// Tube reconnection requires equal fluxes.
class UnequalFluxError : public Error {
public:
    using Error::Error;
};

/// File / format errors; carries the byte offset when known.
class IoError : public Error {
public:
    explicit IoError(const std::string& what, long byte_offset = -1)
        : Error(what), byte_offset_(byte_offset) {}
    long byte_offset() const { return byte_offset_; }

private:
    long byte_offset_;
};

}  // namespace writhe_lab
