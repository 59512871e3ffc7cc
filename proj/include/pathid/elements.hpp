#pragma once

// Optical-element actions on KetExpansion: truncated two-mode squeezers
// (pair sources), polarization rotators, and phase shifters, plus a dense
// matrix-exponential form of the squeezer used for cross-checks.
//
// A source acts as I + eps*a†_s a†_i - conj(eps)*a_s a_i, the first-order
// form of the two-mode squeezing unitary exp(eps*a†a† - conj(eps)*aa).
// Pump phase lives in arg(eps). Every term the source touches has its
// perturbative order raised by one.

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pathid/errors.hpp"
#include "pathid/fock.hpp"

namespace pathid {

// Photon cap per mode. Order <= 2 with one stimulated doubling never needs
// more than 2; 4 leaves room for oracle comparisons at higher cutoffs.
inline constexpr int kMaxPhotonsPerMode = 4;

struct SourceSpec {
  std::string name;
  ModeLabel signal;
  ModeLabel idler;
  double eps_mag = 0.1;     // efficiency amplitude, < 0.5
  double pump_phase = 0.0;  // radians

  // eps as a complex amplitude; the pump phase is its argument.
  Complex epsilon() const { return eps_mag * std::polar(1.0, pump_phase); }
};

struct RotatorSpec {
  int path = 1;  // swaps H and V occupancy on this path
};

struct PhaseSpec {
  ModeLabel mode;
  double phi = 0.0;  // radians
};

using Element = std::variant<SourceSpec, RotatorSpec, PhaseSpec>;

inline KetExpansion apply_squeezer(const KetExpansion& state, const SourceSpec& src,
                                   int max_order) {
  KetExpansion out(max_order, state.prune_threshold());
  const Complex eps = src.epsilon();
  for (const auto& [key, amp] : state.terms()) {
    const auto& [basis, order] = key;
    if (order <= max_order) out.add(basis, order, amp);  // identity part
    if (order + 1 > max_order) continue;

    const int ns = basis.occupation(src.signal);
    const int ni = basis.occupation(src.idler);
    if (ns + 1 > kMaxPhotonsPerMode || ni + 1 > kMaxPhotonsPerMode)
      throw PerturbativeOverflow("source " + src.name + " would exceed " +
                                 std::to_string(kMaxPhotonsPerMode) + " photons on mode " +
                                 to_string(ns >= ni ? src.signal : src.idler));

    // eps * a†_s a†_i
    out.add(basis.with_occupation(src.signal, ns + 1).with_occupation(src.idler, ni + 1),
            order + 1, amp * eps * std::sqrt(double(ns + 1)) * std::sqrt(double(ni + 1)));
    // -conj(eps) * a_s a_i
    if (ns >= 1 && ni >= 1)
      out.add(basis.with_occupation(src.signal, ns - 1).with_occupation(src.idler, ni - 1),
              order + 1, -amp * std::conj(eps) * std::sqrt(double(ns)) * std::sqrt(double(ni)));
  }
  return out;
}

// Swaps H and V occupations on one path: a†_pH <-> a†_pV. Involution.
inline KetExpansion apply_rotator(const KetExpansion& state, const RotatorSpec& rot) {
  KetExpansion out(state.max_order(), state.prune_threshold());
  for (const auto& [key, amp] : state.terms()) {
    const ModeLabel h{rot.path, Pol::H}, v{rot.path, Pol::V};
    const int nh = key.first.occupation(h);
    const int nv = key.first.occupation(v);
    out.add(key.first.with_occupation(h, nv).with_occupation(v, nh), key.second, amp);
  }
  return out;
}

// e^{i n phi} on the target mode.
inline KetExpansion apply_phase(const KetExpansion& state, const PhaseSpec& ph) {
  KetExpansion out(state.max_order(), state.prune_threshold());
  for (const auto& [key, amp] : state.terms()) {
    const int n = key.first.occupation(ph.mode);
    out.add(key.first, key.second, amp * std::polar(1.0, ph.phi * n));
  }
  return out;
}

inline KetExpansion apply_element(const KetExpansion& state, const Element& el, int max_order) {
  if (const auto* s = std::get_if<SourceSpec>(&el)) return apply_squeezer(state, *s, max_order);
  if (const auto* r = std::get_if<RotatorSpec>(&el)) return apply_rotator(state, *r);
  return apply_phase(state, std::get<PhaseSpec>(el));
}

inline KetExpansion run_elements(KetExpansion state, std::span<const Element> elements,
                                 int max_order) {
  for (const auto& el : elements) state = apply_element(state, el, max_order);
  return state;
}

// --- dense squeezer oracle ------------------------------------------------
// exp(eps*a†a† - conj(eps)*aa) on the two source modes, truncated at
// `cutoff` photons per mode, summed as a plain Taylor series to machine
// precision. Independent of the sparse linearized path; used to bound the
// linearization error in tests.

inline Eigen::MatrixXcd squeezer_dense_oracle(Complex eps, int cutoff) {
  if (cutoff < 1 || cutoff > kMaxPhotonsPerMode)
    throw ValidationError("oracle cutoff must be in [1, " +
                          std::to_string(kMaxPhotonsPerMode) + "]");
  const int d = cutoff + 1;
  const int dim = d * d;
  auto idx = [d](int m, int n) { return m * d + n; };

  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (m + 1 < d && n + 1 < d)
        gen(idx(m + 1, n + 1), idx(m, n)) += eps * std::sqrt(double((m + 1) * (n + 1)));
      if (m >= 1 && n >= 1)
        gen(idx(m - 1, n - 1), idx(m, n)) -= std::conj(eps) * std::sqrt(double(m * n));
    }
  }

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
  for (int k = 1; k <= 200; ++k) {
    term = (term * gen / double(k)).eval();
    result += term;
    if (term.norm() < 1e-17 * result.norm()) break;
  }
  return result;
}

inline Eigen::MatrixXcd squeezer_dense_oracle(const SourceSpec& src, int cutoff) {
  return squeezer_dense_oracle(src.epsilon, cutoff);
}

}  // namespace pathid
