#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qrg/bank.hpp"
#include "qrg/clonesim.hpp"

namespace qrg {

// What the compromised terminal writes down for one qubit: the two clone
// bits, a cloning failure, or (no-cloning strategy) the single honest bit.
struct SniffQubit {
  enum class Kind : std::uint8_t { Lost, Clones, Single };

  Kind kind = Kind::Lost;
  std::uint8_t a = 0;  // clone A's bit, or the honest bit for Kind::Single
  std::uint8_t b = 0;  // clone B's bit (Kind::Clones only)

  static SniffQubit from_outcome(const QubitCloneOutcome& o) {
    if (o.lost) return {};
    return {Kind::Clones, o.bit_a, o.bit_b};
  }
  static SniffQubit single(int bit) { return {Kind::Single, static_cast<std::uint8_t>(bit), 0}; }
  QubitCloneOutcome to_outcome() const {
    if (kind != Kind::Clones) return QubitCloneOutcome::make_lost();
    return QubitCloneOutcome::make_bits(a, b);
  }
  friend bool operator==(const SniffQubit&, const SniffQubit&) = default;
};

struct SniffRecord {
  std::string serial;
  int pair_index = 0;
  Basis basis = Basis::Z;  // challenged basis for this pair
  SniffQubit q1, q2;

  friend bool operator==(const SniffRecord&, const SniffRecord&) = default;
};

// Honest terminal: measures every qubit in the challenged basis, no losses.
Response honest_respond(const Token& token, const Challenge& challenge, RngStream& rng);

struct TerminalOutput {
  Response response;
  std::vector<SniffRecord> records;
};

// Compromised terminal. Strategy i answers every pair, substituting coin
// flips for failed clones; strategy ii reports failures as losses; strategy
// iii answers honestly and just logs what it saw. Either way the full
// outcome stream lands in the sniff records.
TerminalOutput attack_respond(StrategyId st, const CloneParams& cp, const Token& token,
                              const Challenge& challenge, RngStream& rng);

// JSON lines: {"serial","pair","basis","q1","q2"}; clone bits as [a,b],
// losses as null, no-cloning records as single-element arrays.
std::string sniff_to_json(const SniffRecord& r);
SniffRecord sniff_from_json(std::string_view line);
void write_sniff_log(std::ostream& os, std::span<const SniffRecord> records);
std::vector<SniffRecord> read_sniff_log(std::istream& is);

}  // namespace qrg
