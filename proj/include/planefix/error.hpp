#pragma once

#include <stdexcept>
#include <string>

namespace planefix {

enum class Errc {
  InvalidInput,
  PointOnCurve,
  AtCenter,
  NotOnBoundary,
  DegenerateRegion,
  InsufficientSamples,
  FixedPointOnCurve,
  NoEscapePath,
  ArcNotMovedOff,
  EndpointEscapes,
  HypothesisFailed,
  BoundaryFixedPoint,
  PointInContinuum,
  NotInjective,
  OrientationReversed,
  OutsideDomain,
  NotALeaf,
  NoPeriodicLeaf,
  NotRefined,
  NotATree,
  NotFixed,
  NotSubtree,
  CellBudgetExceeded,
  NotIsolated,
  BranchAmbiguity,
  NotACrosscut,
  UnboundedGeodesic,
};

const char* errc_name(Errc c);

// Numerical failures exit the CLI with 3; everything else is a validation error.
bool is_numerical(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace planefix
