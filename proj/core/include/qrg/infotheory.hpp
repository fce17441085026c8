#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qrg/clonesim.hpp"

namespace qrg {

// Exact joint distribution P(encoding, observation) for the canonical Z
// challenge, encodings equiprobable. Observation alphabet per qubit:
// cloning strategies {lost, (0,0), (0,1), (1,0), (1,1)} -> 25 pair symbols;
// the no-cloning strategy reports one bit per qubit -> 4 pair symbols.
struct JointTable {
  int n_obs = 0;
  std::vector<double> p;  // kPairStates x n_obs, row-major

  double at(int enc, int obs) const {
    return p[static_cast<std::size_t>(enc) * static_cast<std::size_t>(n_obs) +
             static_cast<std::size_t>(obs)];
  }
  double& at(int enc, int obs) {
    return p[static_cast<std::size_t>(enc) * static_cast<std::size_t>(n_obs) +
             static_cast<std::size_t>(obs)];
  }
};

JointTable observation_distribution(StrategyId st, const CloneParams& cp);

// I(encoding; observation) in bits for the whole pair.
double mutual_information_bits(const JointTable& t);

// Per-qubit rates (pair value halved).
double mutual_info_per_qubit(StrategyId st, const CloneParams& cp);

// Same, conditioned on both qubits surviving the cloner: lost symbols are
// dropped and the table renormalized.
double conditional_mutual_info_per_qubit(const CloneParams& cp);

struct CurvePoint {
  double fidelity = 0;
  double error_rate = 0;
  double info_bits = 0;  // per qubit
  bool conditional = false;
  bool physical = true;  // fidelity within the cloning ceiling
};

// Evenly spaced fidelity grid over [lo, hi]; endpoints exact.
std::vector<double> fidelity_grid(double lo, double hi, int points);

// Error-rate / information trade-off sampled on the grid. The no-cloning
// strategy contributes its single reference point (error 0, 1/2 bit) with
// fidelity recorded at the no-information value 0.5.
std::vector<CurvePoint> trade_off_curve(StrategyId st, double success,
                                        std::span<const double> f_grid, bool conditional);

// CSV: strategy,P,F,epsilon,I_bits_per_qubit,conditional,physical
void write_curve_csv(std::ostream& os, StrategyId st, double success,
                     std::span<const CurvePoint> pts);

}  // namespace qrg
