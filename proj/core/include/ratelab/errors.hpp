#pragma once

#include <stdexcept>
#include <string>

namespace ratelab {

// Base class for named numeric failures. The CLI maps these to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |T'| vanished (below 1e-30) along an orbit used for a log-derivative sum.
struct DerivativeVanishes : Error {
  using Error::Error;
};

// Simultaneous root finding left a residual above tolerance after the
// iteration budget.
struct RootFindingDiverged : Error {
  using Error::Error;
};

// An enumeration (d^n orbit points or m^|Lambda| configurations) would
// exceed the desk-scale cap.
struct CapExceeded : Error {
  using Error::Error;
};

// Power iteration failed to converge within its iteration budget.
struct NonConvergence : Error {
  using Error::Error;
};

// Evaluation point outside the usable part of a sampled curve.
struct OutOfDomain : Error {
  using Error::Error;
};

// Level-1 rate evaluation outside (chi_inf, chi_sup); signals I = +infinity.
struct OutOfRange : Error {
  using Error::Error;
};

// The pressure curve is affine: the strictly convex branch is empty.
struct DegenerateCurve : Error {
  using Error::Error;
};

// A level-2 rate evaluated below -1e-6; the inputs are inconsistent.
struct NegativeRate : Error {
  using Error::Error;
};

}  // namespace ratelab
