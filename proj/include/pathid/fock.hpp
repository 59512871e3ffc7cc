#pragma once

// Sparse bosonic Fock-state algebra over polarization path modes. States are
// kept as finite sums of occupation-number basis kets with complex amplitudes
// and a perturbative-order tag per term, so truncation in powers of the
// source efficiency is exact rather than inferred from photon number.

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathid/errors.hpp"

namespace pathid {

using Complex = std::complex<double>;

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }
inline Pol other_pol(Pol p) { return p == Pol::H ? Pol::V : Pol::H; }

// One optical mode: a path index plus a polarization. Ordered by path, then
// H before V, which fixes the canonical form of every basis state.
struct ModeLabel {
  int path = 1;
  Pol pol = Pol::H;

  friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
};

inline std::string to_string(const ModeLabel& m) {
  return std::to_string(m.path) + ":" + pol_char(m.pol);
}

// Occupation-number basis ket. Entries are sorted by mode and never zero.
class FockBasisState {
public:
  using Entry = std::pair<ModeLabel, int>;

  FockBasisState() = default;

  static FockBasisState vacuum() { return {}; }

  int occupation(const ModeLabel& m) const {
    auto it = std::lower_bound(occ_.begin(), occ_.end(), m,
                               [](const Entry& e, const ModeLabel& k) { return e.first < k; });
    return (it != occ_.end() && it->first == m) ? it->second : 0;
  }

  // Returns a copy with the occupation of `m` set to `n` (n == 0 erases).
  FockBasisState with_occupation(const ModeLabel& m, int n) const {
    FockBasisState out = *this;
    auto it = std::lower_bound(out.occ_.begin(), out.occ_.end(), m,
                               [](const Entry& e, const ModeLabel& k) { return e.first < k; });
    if (it != out.occ_.end() && it->first == m) {
      if (n == 0)
        out.occ_.erase(it);
      else
        it->second = n;
    } else if (n != 0) {
      out.occ_.insert(it, {m, n});
    }
    return out;
  }

  int total_photons() const {
    int t = 0;
    for (const auto& [m, n] : occ_) t += n;
    return t;
  }

  int photons_on_path(int path) const {
    return occupation({path, Pol::H}) + occupation({path, Pol::V});
  }

  bool is_vacuum() const { return occ_.empty(); }

  const std::vector<Entry>& entries() const { return occ_; }

  friend auto operator<=>(const FockBasisState&, const FockBasisState&) = default;

private:
  std::vector<Entry> occ_;
};

inline std::string to_string(const FockBasisState& b) {
  if (b.is_vacuum()) return "|vac>";
  std::string s = "|";
  bool first = true;
  for (const auto& [m, n] : b.entries()) {
    if (!first) s += ",";
    first = false;
    if (n > 1) s += std::to_string(n) + "_";
    s += to_string(m);
  }
  return s + ">";
}

struct PerturbativeTerm {
  FockBasisState basis;
  Complex amplitude;
  int order = 0;
};

inline constexpr double kDefaultPruneThreshold = 1e-14;

// Finite superposition of Fock basis states, keyed by (basis, order) so the
// same ket may carry contributions of different perturbative order until
// truncation collapses them.
class KetExpansion {
public:
  using Key = std::pair<FockBasisState, int>;  // (basis, order)
  using TermMap = std::map<Key, Complex>;

  explicit KetExpansion(int max_order = 2, double prune_threshold = kDefaultPruneThreshold)
      : max_order_(max_order), prune_threshold_(prune_threshold) {}

  static KetExpansion vacuum(int max_order = 2,
                             double prune_threshold = kDefaultPruneThreshold) {
    KetExpansion s(max_order, prune_threshold);
    s.add(FockBasisState::vacuum(), 0, Complex{1.0, 0.0});
    return s;
  }

  // Merges a contribution, pruning amplitudes that fall under the threshold.
  void add(const FockBasisState& basis, int order, Complex amp) {
    Key k{basis, order};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (std::abs(amp) > prune_threshold_) terms_.emplace(std::move(k), amp);
      return;
    }
    it->second += amp;
    if (std::abs(it->second) <= prune_threshold_) terms_.erase(it);
  }

  const TermMap& terms() const { return terms_; }
  int max_order() const { return max_order_; }
  double prune_threshold() const { return prune_threshold_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Total amplitude of a basis state, summed over perturbative orders.
  Complex amplitude(const FockBasisState& basis) const {
    Complex a{0.0, 0.0};
    for (auto it = terms_.lower_bound({basis, 0});
         it != terms_.end() && it->first.first == basis; ++it)
      a += it->second;
    return a;
  }

  std::vector<PerturbativeTerm> term_list() const {
    std::vector<PerturbativeTerm> out;
    out.reserve(terms_.size());
    for (const auto& [k, amp] : terms_) out.push_back({k.first, amp, k.second});
    return out;
  }

  friend bool operator==(const KetExpansion& a, const KetExpansion& b) {
    return a.max_order_ == b.max_order_ && a.terms_ == b.terms_;
  }

private:
  TermMap terms_;
  int max_order_;
  double prune_threshold_;
};

// a†_m: each |..,n,..> maps to sqrt(n+1)|..,n+1,..>, linearly over terms.
inline KetExpansion create(const KetExpansion& state, const ModeLabel& m) {
  KetExpansion out(state.max_order(), state.prune_threshold());
  for (const auto& [key, amp] : state.terms()) {
    int n = key.first.occupation(m);
    out.add(key.first.with_occupation(m, n + 1), key.second,
            amp * std::sqrt(static_cast<double>(n + 1)));
  }
  return out;
}

// a_m: |..,n,..> maps to sqrt(n)|..,n-1,..>; terms with n = 0 vanish.
inline KetExpansion annihilate(const KetExpansion& state, const ModeLabel& m) {
  KetExpansion out(state.max_order(), state.prune_threshold());
  for (const auto& [key, amp] : state.terms()) {
    int n = key.first.occupation(m);
    if (n == 0) continue;
    out.add(key.first.with_occupation(m, n - 1), key.second,
            amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

// <a|b>: conjugate-bilinear over basis states (order tags are bookkeeping,
// not physics, so amplitudes are merged per ket first).
inline Complex inner_product(const KetExpansion& a, const KetExpansion& b) {
  std::map<FockBasisState, Complex> am, bm;
  for (const auto& [k, v] : a.terms()) am[k.first] += v;
  for (const auto& [k, v] : b.terms()) bm[k.first] += v;
  Complex s{0.0, 0.0};
  for (const auto& [basis, va] : am) {
    auto it = bm.find(basis);
    if (it != bm.end()) s += std::conj(va) * it->second;
  }
  return s;
}

inline double norm(const KetExpansion& s) {
  return std::sqrt(std::max(0.0, inner_product(s, s).real()));
}

inline KetExpansion truncate(const KetExpansion& state, int max_order) {
  KetExpansion out(max_order, state.prune_threshold());
  for (const auto& [key, amp] : state.terms())
    if (key.second <= max_order) out.add(key.first, key.second, amp);
  return out;
}

inline KetExpansion scaled(const KetExpansion& state, Complex factor) {
  KetExpansion out(state.max_order(), state.prune_threshold());
  for (const auto& [key, amp] : state.terms()) out.add(key.first, key.second, amp * factor);
  return out;
}

// --- JSON serialization --------------------------------------------------
// A KetExpansion serializes to an array of terms, each
//   {"modes": [[path, "H"|"V", n], ...], "re": ..., "im": ..., "order": ...}
// with modes in canonical order. Map iteration order makes this stable.

inline void to_json(nlohmann::json& j, const KetExpansion& s) {
  j = nlohmann::json::array();
  for (const auto& [key, amp] : s.terms()) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& [m, n] : key.first.entries())
      modes.push_back({m.path, std::string(1, pol_char(m.pol)), n});
    j.push_back({{"modes", std::move(modes)},
                 {"re", amp.real()},
                 {"im", amp.imag()},
                 {"order", key.second}});
  }
}

// max_order < 0 means "infer from the highest term order present".
inline KetExpansion ket_expansion_from_json(const nlohmann::json& j, int max_order = -1,
                                            double prune_threshold = kDefaultPruneThreshold) {
  if (max_order < 0) {
    max_order = 0;
    for (const auto& term : j) max_order = std::max(max_order, term.at("order").get<int>());
  }
  KetExpansion s(max_order, prune_threshold);
  for (const auto& term : j) {
    FockBasisState basis;
    for (const auto& mode : term.at("modes")) {
      const std::string pol = mode.at(1).get<std::string>();
      if (pol != "H" && pol != "V") throw ValidationError("bad polarization in JSON: " + pol);
      basis = basis.with_occupation({mode.at(0).get<int>(), pol == "H" ? Pol::H : Pol::V},
                                    mode.at(2).get<int>());
    }
    s.add(basis, term.at("order").get<int>(),
          Complex{term.at("re").get<double>(), term.at("im").get<double>()});
  }
  return s;
}

}  // namespace pathid
