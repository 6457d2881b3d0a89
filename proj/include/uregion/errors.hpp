#pragma once

#include <stdexcept>
#include <string>

namespace uregion {

// Base for every error raised by the library. Precondition violations use
// std::invalid_argument directly; the classes below carry a distinct meaning
// that callers are expected to branch on.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Observable proportional to the identity: its variance vanishes for every
// state, so no projector normal form exists.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

// Operator pair outside the analytic characterization (d >= 3 with operators
// that are not rank-1 projectors). Callers may fall back to sampling.
class OutOfAnalyticScope : public Error {
 public:
  using Error::Error;
};

// Qudit regions with theta > pi/4 fill the box; their boundary is the box edge.
class BoxBoundaryFallback : public Error {
 public:
  using Error::Error;
};

// Post-selection found no events in the qubit ports.
class NoQubitEvents : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace uregion
