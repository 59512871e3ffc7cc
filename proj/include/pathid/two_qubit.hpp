#pragma once

// Two-qubit polarization density matrix of the retained paths and the small
// basis toolkit shared by the metrics and tomography layers. Basis order is
// {HH, HV, VH, VV} with Alice first.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pathid/errors.hpp"
#include "pathid/fock.hpp"

namespace pathid {

inline constexpr std::array<const char*, 4> kTwoQubitBasis = {"HH", "HV", "VH", "VV"};

struct TwoQubitDensityMatrix {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  // Unnormalized post-selection probability in raw epsilon-power units.
  double success_weight = 0.0;

  bool is_physical(double herm_tol = 1e-12, double psd_tol = -1e-10,
                   double trace_tol = 1e-12) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
      return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= psd_tol;
  }
};

// (|HH> + |VV>)/sqrt(2)
inline Eigen::Vector4cd phi_plus_ket() {
  Eigen::Vector4cd v;
  v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return v;
}

inline TwoQubitDensityMatrix phi_plus_state() {
  const Eigen::Vector4cd v = phi_plus_ket();
  return {v * v.adjoint(), 1.0};
}

// Residual distinguishability of the pair origins: scales the HH<->VV
// coherence by gamma and leaves everything else alone. gamma = 1 is ideal.
inline TwoQubitDensityMatrix apply_dephasing(TwoQubitDensityMatrix state, double gamma) {
  state.rho(0, 3) *= gamma;
  state.rho(3, 0) *= gamma;
  return state;
}

enum class MeasBasis { HV, DA, RL };

inline const char* basis_name(MeasBasis b) {
  switch (b) {
    case MeasBasis::HV: return "HV";
    case MeasBasis::DA: return "DA";
    case MeasBasis::RL: return "RL";
  }
  return "HV";
}

inline MeasBasis basis_from_name(const std::string& s) {
  if (s == "HV") return MeasBasis::HV;
  if (s == "DA") return MeasBasis::DA;
  if (s == "RL") return MeasBasis::RL;
  throw ValidationError("unknown measurement basis: " + s);
}

// The two orthonormal single-qubit analyzer states of a basis, in the order
// its label is written: (H,V), (D,A) = ((H±V)/sqrt2), (R,L) = ((H±iV)/sqrt2).
inline std::array<Eigen::Vector2cd, 2> basis_vectors(MeasBasis b) {
  const Complex i{0.0, 1.0};
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd first, second;
  switch (b) {
    case MeasBasis::HV:
      first << 1.0, 0.0;
      second << 0.0, 1.0;
      break;
    case MeasBasis::DA:
      first << s, s;
      second << s, -s;
      break;
    case MeasBasis::RL:
      first << s, s * i;
      second << s, -s * i;
      break;
  }
  return {first, second};
}

inline std::array<char, 2> basis_outcome_chars(MeasBasis b) {
  switch (b) {
    case MeasBasis::HV: return {'H', 'V'};
    case MeasBasis::DA: return {'D', 'A'};
    case MeasBasis::RL: return {'R', 'L'};
  }
  return {'H', 'V'};
}

// --- JSON ------------------------------------------------------------------
// {"basis": ["HH","HV","VH","VV"], "re": [[...]], "im": [[...]], "weight": w}

inline void to_json(nlohmann::json& j, const TwoQubitDensityMatrix& s) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      re_row.push_back(s.rho(r, c).real());
      im_row.push_back(s.rho(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j = {{"basis", kTwoQubitBasis},
       {"re", std::move(re)},
       {"im", std::move(im)},
       {"weight", s.success_weight}};
}

inline void from_json(const nlohmann::json& j, TwoQubitDensityMatrix& s) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      s.rho(r, c) = Complex{j.at("re").at(r).at(c).get<double>(),
                            j.at("im").at(r).at(c).get<double>()};
  s.success_weight = j.at("weight").get<double>();
}

}  // namespace pathid
