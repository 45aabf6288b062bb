// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_ERRORS_HPP
#define PAROBIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parobin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed sample grid (not strictly increasing, not positive, too short).
struct GridError : Error {
  using Error::Error;
};

// Two discrete functions live on different meshes.
struct MeshMismatch : Error {
  using Error::Error;
};

// A truncated reaction / functional needs a barrier that was not supplied.
struct BarrierMissing : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

// estimate_xi_hat exhausted its candidate range.
struct NotFound : Error {
  using Error::Error;
};

struct CoefficientSearchFailed : Error {
  using Error::Error;
};

// Monotone iteration decreased beyond tolerance even after the shift retry.
struct MonotoneViolation : Error {
  using Error::Error;
};

struct BracketError : Error {
  using Error::Error;
};

struct NoConvergenceError : Error {
  using Error::Error;
};

struct ZeroFunction : Error {
  using Error::Error;
};

struct NotPositive : Error {
  using Error::Error;
};

struct NotPLaplace : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace parobin

#endif
