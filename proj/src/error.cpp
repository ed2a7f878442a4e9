#include "planefix/error.hpp"

namespace planefix {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::PointOnCurve: return "PointOnCurve";
    case Errc::AtCenter: return "AtCenter";
    case Errc::NotOnBoundary: return "NotOnBoundary";
    case Errc::DegenerateRegion: return "DegenerateRegion";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::FixedPointOnCurve: return "FixedPointOnCurve";
    case Errc::NoEscapePath: return "NoEscapePath";
    case Errc::ArcNotMovedOff: return "ArcNotMovedOff";
    case Errc::EndpointEscapes: return "EndpointEscapes";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::BoundaryFixedPoint: return "BoundaryFixedPoint";
    case Errc::PointInContinuum: return "PointInContinuum";
    case Errc::NotInjective: return "NotInjective";
    case Errc::OrientationReversed: return "OrientationReversed";
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::NotALeaf: return "NotALeaf";
    case Errc::NoPeriodicLeaf: return "NoPeriodicLeaf";
    case Errc::NotRefined: return "NotRefined";
    case Errc::NotATree: return "NotATree";
    case Errc::NotFixed: return "NotFixed";
    case Errc::NotSubtree: return "NotSubtree";
    case Errc::CellBudgetExceeded: return "CellBudgetExceeded";
    case Errc::NotIsolated: return "NotIsolated";
    case Errc::BranchAmbiguity: return "BranchAmbiguity";
    case Errc::NotACrosscut: return "NotACrosscut";
    case Errc::UnboundedGeodesic: return "UnboundedGeodesic";
  }
  return "Unknown";
}

bool is_numerical(Errc c) {
  switch (c) {
    case Errc::InsufficientSamples:
    case Errc::NoEscapePath:
    case Errc::BoundaryFixedPoint:
    case Errc::NotIsolated:
    case Errc::BranchAmbiguity:
    case Errc::CellBudgetExceeded:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace planefix
