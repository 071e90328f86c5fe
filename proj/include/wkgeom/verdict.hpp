#pragma once

#include <string>
#include <vector>

#include "wkgeom/errors.hpp"

namespace wkgeom {

/// Named pass/fail outcome with a signed margin (>= 0 means pass with that
/// much slack).  Every verdict corresponds to a named invariant of the
/// library (see the invariant registry in the README).
struct Verdict {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

inline void require_all(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts)
    if (!v.pass)
      throw VerdictFailedError(v.name + " failed (margin " + std::to_string(v.margin) +
                               (v.detail.empty() ? "" : ", " + v.detail) + ")");
}

}  // namespace wkgeom
