#include "qrg/clonesim.hpp"

#include <stdexcept>

namespace qrg {

void validate(const CloneParams& cp) {
  if (!(cp.fidelity >= 0.5 && cp.fidelity <= 1.0))
    throw std::invalid_argument("fidelity must lie in [0.5, 1]");
  if (!(cp.success > 0.0 && cp.success <= 1.0))
    throw std::invalid_argument("success probability must lie in (0, 1]");
}

QubitCloneOutcome clone_and_measure_qubit(QubitState s, Basis b, const CloneParams& cp,
                                          RngStream& rng) {
  if (!rng.bernoulli(cp.success)) return QubitCloneOutcome::make_lost();
  int a, c;
  if (basis_of(s) == b) {
    const int truth = bit_of(s);
    a = rng.bernoulli(cp.fidelity) ? truth : 1 - truth;
    c = rng.bernoulli(cp.fidelity) ? truth : 1 - truth;
  } else {
    a = rng.bit();
    c = rng.bit();
  }
  return QubitCloneOutcome::make_bits(a, c);
}

std::array<double, 5> clone_outcome_pmf(QubitState s, Basis b, const CloneParams& cp) {
  const double P = cp.success;
  double q0, q1;  // P(clone bit == 0), P(clone bit == 1)
  if (basis_of(s) == b) {
    const int truth = bit_of(s);
    q0 = truth == 0 ? cp.fidelity : 1.0 - cp.fidelity;
    q1 = 1.0 - q0;
  } else {
    q0 = q1 = 0.5;
  }
  return {1.0 - P, P * q0 * q0, P * q0 * q1, P * q1 * q0, P * q1 * q1};
}

std::string to_string(StrategyId st) {
  switch (st) {
    case StrategyId::AlwaysAnswer:
      return "i";
    case StrategyId::ReportLoss:
      return "ii";
    case StrategyId::NoCloning:
      return "iii";
  }
  throw std::invalid_argument("bad StrategyId");
}

StrategyId strategy_from_string(std::string_view s) {
  if (s == "i" || s == "I") return StrategyId::AlwaysAnswer;
  if (s == "ii" || s == "II") return StrategyId::ReportLoss;
  if (s == "iii" || s == "III") return StrategyId::NoCloning;
  throw std::invalid_argument("unknown strategy (expected i, ii or iii)");
}

EventProbs event_probabilities(const CloneParams& cp) {
  validate(cp);
  const double P = cp.success, F = cp.fidelity;
  EventProbs e;
  e.p_correct = 0.5 * P * P * F * F;
  e.p_error = 0.5 * P * P * (1 - F) * (1 - F) + P * P * F * (1 - F);
  e.p_total = e.p_correct + e.p_error;
  return e;
}

double error_rate(StrategyId st, const CloneParams& cp) {
  validate(cp);
  switch (st) {
    case StrategyId::AlwaysAnswer:
      // lost clones are papered over with coin flips
      return 0.5 * (1 - cp.success) + cp.success * (1 - cp.fidelity);
    case StrategyId::ReportLoss:
      return 1 - cp.fidelity;
    case StrategyId::NoCloning:
      return 0.0;
  }
  throw std::invalid_argument("bad StrategyId");
}

Inference classify_pair(const QubitCloneOutcome& q1, const QubitCloneOutcome& q2,
                        Basis challenge) {
  Inference inf;
  if (q1.lost || q2.lost) return inf;

  const bool a1 = q1.agree(), a2 = q2.agree();
  if (a1 == a2) {
    if (!a1) return inf;  // both pairs of clones disagree: nothing learned
    // Both agree: the encoding has the agreed value at one position or the
    // other; four candidates survive.
    inf.kind = Inference::Kind::FourCandidates;
    const QubitState s1 = make_state(challenge, q1.bit_a);
    const QubitState s2 = make_state(challenge, q2.bit_a);
    int n = 0;
    for (int k = 0; k < kPairStates; ++k) {
      const PairState p = pair_from_index(k);
      if (p.first == s1 || p.second == s2) inf.candidates[static_cast<std::size_t>(n++)] = p;
    }
    return inf;
  }

  // Exactly one qubit's clones agree: that qubit is pinned to the agreed
  // state in the challenged basis, eliminating six encodings.
  inf.kind = Inference::Kind::SixEliminated;
  inf.position = a1 ? 1 : 2;
  inf.state = make_state(challenge, a1 ? q1.bit_a : q2.bit_a);
  return inf;
}

}  // namespace qrg
