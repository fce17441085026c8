#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "qrg/qstate.hpp"
#include "qrg/rng.hpp"

namespace qrg {

// Imperfect-cloner figures of merit: per-clone fidelity F in [1/2, 1] and
// per-qubit success probability P in (0, 1].
struct CloneParams {
  double fidelity = 1.0;
  double success = 1.0;
};

void validate(const CloneParams& cp);  // throws std::invalid_argument

// 1/2 (1 + 1/sqrt 2): ceiling for symmetric phase-covariant cloning.
inline constexpr double kCloneFidelityCeiling = 0.85355339059327373;
// best classical measure-and-resend fidelity on this state set
inline constexpr double kClassicalFidelity = 0.75;
// success probability of the linear-optical realization
inline constexpr double kLinearOpticsSuccess = 1.0 / 3.0;

// Result of cloning one qubit and measuring both clones in the challenged
// basis: either nothing (the cloner flagged failure) or two bits.
struct QubitCloneOutcome {
  bool lost = true;
  std::uint8_t bit_a = 0;
  std::uint8_t bit_b = 0;

  static QubitCloneOutcome make_lost() { return {}; }
  static QubitCloneOutcome make_bits(int a, int b) {
    return {false, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
  }
  bool agree() const { return !lost && bit_a == bit_b; }
  friend bool operator==(const QubitCloneOutcome&, const QubitCloneOutcome&) = default;
};

// Clone success w.p. P. On success the two clone bits are conditionally
// independent given the input: in the matching basis each equals the true
// bit w.p. F; in the conjugate basis each is a fair coin.
QubitCloneOutcome clone_and_measure_qubit(QubitState s, Basis b, const CloneParams& cp,
                                          RngStream& rng);

// Exact pmf of clone_and_measure_qubit over the five outcomes
// {lost, (0,0), (0,1), (1,0), (1,1)}.
std::array<double, 5> clone_outcome_pmf(QubitState s, Basis b, const CloneParams& cp);

// Terminal strategies: answer every challenge (substituting coin flips for
// failed clones), report failures as losses, or don't clone at all.
enum class StrategyId : std::uint8_t { AlwaysAnswer, ReportLoss, NoCloning };

std::string to_string(StrategyId st);                 // "i", "ii", "iii"
StrategyId strategy_from_string(std::string_view s);  // accepts i/ii/iii

// Per-pair probabilities of elimination events under the cloning attack.
struct EventProbs {
  double p_correct = 0;  // elimination event consistent with the encoding
  double p_error = 0;    // elimination event contradicting it
  double p_total = 0;    // any elimination event; equals P^2/2
};

EventProbs event_probabilities(const CloneParams& cp);

// Bank-side error rate on checked (matched-basis, non-lost) qubits.
double error_rate(StrategyId st, const CloneParams& cp);

// What one cloned pair reveals given the challenged basis.
struct Inference {
  enum class Kind : std::uint8_t { SixEliminated, FourCandidates, NoInference };

  Kind kind = Kind::NoInference;
  // SixEliminated: the pinned qubit (1 = first, 2 = second) and its state.
  int position = 0;
  QubitState state{};
  // FourCandidates: surviving encodings, ascending pair index.
  std::array<PairState, 4> candidates{};
};

// Classification rule: clones of exactly one qubit agreeing pins that qubit
// (SixEliminated); both agreeing leaves four candidates; both disagreeing or
// any loss yields nothing.
Inference classify_pair(const QubitCloneOutcome& q1, const QubitCloneOutcome& q2,
                        Basis challenge);

}  // namespace qrg
