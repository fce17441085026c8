#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qrg/rng.hpp"

namespace qrg {

enum class Basis : std::uint8_t { Z, X };

Basis conjugate(Basis b);
char to_char(Basis b);
Basis basis_from_char(char c);

// The four preparations used by the scheme. X-basis states carry bits as
// |+> = 0, |-> = 1.
enum class QubitState : std::uint8_t { Zero, One, Plus, Minus };

Basis basis_of(QubitState s);
int bit_of(QubitState s);
QubitState make_state(Basis b, int bit);
std::string to_string(QubitState s);  // "0", "1", "+", "-"
QubitState state_from_string(std::string_view s);

// Ordered two-qubit encoding; valid pairs have exactly one qubit in Z and
// the other in X.
struct PairState {
  QubitState first{};
  QubitState second{};
  friend bool operator==(const PairState&, const PairState&) = default;
};

inline constexpr int kPairStates = 8;

// Fixed enumeration of the encoding set:
// 0:|0+> 1:|0-> 2:|1+> 3:|1-> 4:|+0> 5:|-0> 6:|+1> 7:|-1>
PairState pair_from_index(int k);
int pair_index(PairState p);
std::string to_string(PairState p);  // "0+", "-1", ...

// Projective measurement: deterministic when the basis matches the
// preparation, a fair coin otherwise.
int measure(QubitState s, Basis b, RngStream& rng);

}  // namespace qrg
