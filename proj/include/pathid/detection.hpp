#pragma once

// Detection patterns: per-path detector constraints plus the two retained
// qubit paths. A path carrying an any-polarization exactly-one constraint is
// a retained analysis path (Alice and Bob); exactly two of those must exist.

#include <map>
#include <string>
#include <vector>

#include "pathid/errors.hpp"
#include "pathid/fock.hpp"

namespace pathid {

struct DetectionConstraint {
  enum class Kind {
    ExactlyOneAny,    // one photon, either polarization; retained qubit path
    ExactlyOnePol,    // one photon in `pol`, none in the other
    BucketAtLeastOne, // >= 1 photon in `pol`, non-number-resolving
    Unconstrained,    // undetected path, traced out
  };
  Kind kind = Kind::Unconstrained;
  Pol pol = Pol::V;  // meaningful for ExactlyOnePol and BucketAtLeastOne

  friend bool operator==(const DetectionConstraint&, const DetectionConstraint&) = default;
};

struct DetectionPattern {
  std::map<int, DetectionConstraint> constraints;  // by path; absent = any

  // Retained qubit paths in ascending order (Alice first).
  std::vector<int> retained_paths() const {
    std::vector<int> r;
    for (const auto& [path, c] : constraints)
      if (c.kind == DetectionConstraint::Kind::ExactlyOneAny) r.push_back(path);
    return r;
  }

  void require_two_retained() const {
    if (retained_paths().size() != 2)
      throw ValidationError("detection pattern must mark exactly two retained paths "
                            "(constraint `one`), got " +
                            std::to_string(retained_paths().size()));
  }

  DetectionConstraint constraint_for(int path) const {
    auto it = constraints.find(path);
    return it == constraints.end() ? DetectionConstraint{} : it->second;
  }

  // Minimum photon number any accepted event must carry.
  int min_detected_photons() const {
    int n = 0;
    for (const auto& [path, c] : constraints) {
      switch (c.kind) {
        case DetectionConstraint::Kind::ExactlyOneAny:
        case DetectionConstraint::Kind::ExactlyOnePol:
        case DetectionConstraint::Kind::BucketAtLeastOne: n += 1; break;
        case DetectionConstraint::Kind::Unconstrained: break;
      }
    }
    return n;
  }

  friend bool operator==(const DetectionPattern&, const DetectionPattern&) = default;
};

inline std::string to_string(const DetectionConstraint& c) {
  using Kind = DetectionConstraint::Kind;
  switch (c.kind) {
    case Kind::ExactlyOneAny: return "one";
    case Kind::ExactlyOnePol: return std::string("one:") + pol_char(c.pol);
    case Kind::BucketAtLeastOne: return std::string("bucket:") + pol_char(c.pol);
    case Kind::Unconstrained: return "any";
  }
  return "any";
}

}  // namespace pathid
