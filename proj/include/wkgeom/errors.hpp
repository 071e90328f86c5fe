#pragma once

#include <stdexcept>
#include <string>

namespace wkgeom {

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polytope construction.
struct UnboundedError : Error { using Error::Error; };
struct EmptyInteriorError : Error { using Error::Error; };
struct NotDelzantError : Error { using Error::Error; };

// Weighted moment systems.
struct SingularGramError : Error { using Error::Error; };

// Weight functions.
struct NotPositiveOnPError : Error { using Error::Error; };
struct BadParamsError : Error { using Error::Error; };

// Metric data. NotConvex: the symplectic potential fails strict convexity,
// i.e. the datum is not a Kahler metric. NotPositive: the solved profile is
// nonpositive in the interior (no invariant extremal metric of this form).
struct NotConvexError : Error { using Error::Error; };
struct NotPositiveError : Error { using Error::Error; };

// Verification outcomes.
struct CheckFailedError : Error { using Error::Error; };
struct VerdictFailedError : Error { using Error::Error; };
struct UniquenessViolatedError : Error { using Error::Error; };
struct InequalityViolatedError : Error { using Error::Error; };
struct MinimalityViolatedError : Error { using Error::Error; };

// The eps-geodesic Newton continuation.
struct NewtonDivergedError : Error { using Error::Error; };
struct InadmissibleFiberError : Error { using Error::Error; };

// CLI configuration.
struct ConfigError : Error { using Error::Error; };

/// True for errors that mean "no object of the requested kind exists for
/// these inputs" rather than a defect (CLI exit code 3).
inline bool is_infeasibility(const Error& e) {
  return dynamic_cast<const NotPositiveError*>(&e) != nullptr ||
         dynamic_cast<const NotConvexError*>(&e) != nullptr ||
         dynamic_cast<const NotPositiveOnPError*>(&e) != nullptr;
}

/// Module-level error name for diagnostics.
inline const char* error_name(const Error& e) {
  if (dynamic_cast<const UnboundedError*>(&e)) return "Unbounded";
  if (dynamic_cast<const EmptyInteriorError*>(&e)) return "EmptyInterior";
  if (dynamic_cast<const NotDelzantError*>(&e)) return "NotDelzant";
  if (dynamic_cast<const SingularGramError*>(&e)) return "SingularGram";
  if (dynamic_cast<const NotPositiveOnPError*>(&e)) return "NotPositiveOnP";
  if (dynamic_cast<const BadParamsError*>(&e)) return "BadParams";
  if (dynamic_cast<const NotConvexError*>(&e)) return "NotConvex";
  if (dynamic_cast<const NotPositiveError*>(&e)) return "NotPositive";
  if (dynamic_cast<const CheckFailedError*>(&e)) return "CheckFailed";
  if (dynamic_cast<const VerdictFailedError*>(&e)) return "VerdictFailed";
  if (dynamic_cast<const UniquenessViolatedError*>(&e)) return "UniquenessViolated";
  if (dynamic_cast<const InequalityViolatedError*>(&e)) return "InequalityViolated";
  if (dynamic_cast<const MinimalityViolatedError*>(&e)) return "MinimalityViolated";
  if (dynamic_cast<const NewtonDivergedError*>(&e)) return "NewtonDiverged";
  if (dynamic_cast<const InadmissibleFiberError*>(&e)) return "InadmissibleFiber";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  return "Error";
}

}  // namespace wkgeom
