#include "qrg/qstate.hpp"

#include <array>
#include <stdexcept>

namespace qrg {

Basis conjugate(Basis b) { return b == Basis::Z ? Basis::X : Basis::Z; }

char to_char(Basis b) { return b == Basis::Z ? 'Z' : 'X'; }

Basis basis_from_char(char c) {
  switch (c) {
    case 'Z':
    case 'z':
      return Basis::Z;
    case 'X':
    case 'x':
      return Basis::X;
    default:
      throw std::invalid_argument("unknown basis character");
  }
}

Basis basis_of(QubitState s) {
  return (s == QubitState::Zero || s == QubitState::One) ? Basis::Z : Basis::X;
}

int bit_of(QubitState s) {
  return (s == QubitState::One || s == QubitState::Minus) ? 1 : 0;
}

QubitState make_state(Basis b, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  if (b == Basis::Z) return bit ? QubitState::One : QubitState::Zero;
  return bit ? QubitState::Minus : QubitState::Plus;
}

std::string to_string(QubitState s) {
  switch (s) {
    case QubitState::Zero:
      return "0";
    case QubitState::One:
      return "1";
    case QubitState::Plus:
      return "+";
    case QubitState::Minus:
      return "-";
  }
  throw std::invalid_argument("bad QubitState");
}

QubitState state_from_string(std::string_view s) {
  if (s.size() == 1) {
    switch (s[0]) {
      case '0':
        return QubitState::Zero;
      case '1':
        return QubitState::One;
      case '+':
        return QubitState::Plus;
      case '-':
        return QubitState::Minus;
      default:
        break;
    }
  }
  throw std::invalid_argument("unknown qubit state symbol");
}

namespace {

constexpr std::array<PairState, kPairStates> kPairTable = {{
    {QubitState::Zero, QubitState::Plus},
    {QubitState::Zero, QubitState::Minus},
    {QubitState::One, QubitState::Plus},
    {QubitState::One, QubitState::Minus},
    {QubitState::Plus, QubitState::Zero},
    {QubitState::Minus, QubitState::Zero},
    {QubitState::Plus, QubitState::One},
    {QubitState::Minus, QubitState::One},
}};

}  // namespace

PairState pair_from_index(int k) {
  if (k < 0 || k >= kPairStates) throw std::out_of_range("pair index out of range");
  return kPairTable[static_cast<std::size_t>(k)];
}

int pair_index(PairState p) {
  for (int k = 0; k < kPairStates; ++k) {
    if (kPairTable[static_cast<std::size_t>(k)] == p) return k;
  }
  throw std::invalid_argument("pair is not in the encoding set");
}

std::string to_string(PairState p) { return to_string(p.first) + to_string(p.second); }

int measure(QubitState s, Basis b, RngStream& rng) {
  if (basis_of(s) == b) return bit_of(s);
  return rng.bit();
}

}  // namespace qrg
