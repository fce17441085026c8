#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qrg/mint.hpp"
#include "qrg/qstate.hpp"
#include "qrg/rng.hpp"

namespace qrg {

struct Challenge {
  std::string serial;
  std::vector<Basis> bases;  // one per pair
};

// Terminal's report for one pair; nullopt = declared loss.
struct PairOutcome {
  std::optional<int> q1;
  std::optional<int> q2;
};

struct Response {
  std::string serial;
  std::vector<PairOutcome> outcomes;
};

struct Thresholds {
  double max_error = 0.25;
  double max_loss = 0.75;
};

struct Verdict {
  bool accepted = false;
  double error_rate = 0;  // over matched-basis, non-lost qubits
  double loss_rate = 0;   // over all qubits
  int checked_qubits = 0;
};

Challenge make_challenge(std::string serial, int n_pairs, RngStream& rng);

// Re-mints the token from the spec and checks only the qubit whose encoded
// basis matches the challenged one; the conjugate qubit's answer is noise by
// construction and is ignored (losses still count against loss_rate).
Verdict verify(const EncodingSpec& spec, const Challenge& challenge, const Response& response,
               const Thresholds& thresholds);

struct LedgerEntry {
  std::string serial;
  std::int64_t issued_at = 0;  // unix seconds
  bool spent = false;
};

// Append-only JSON-lines ledger: every mutation appends a line, the latest
// line per serial wins, so a restart reproduces the state exactly.
class Ledger {
 public:
  Ledger() = default;                                // memory only
  static Ledger open(const std::string& path);       // load + append mode

  bool contains(const std::string& serial) const;
  bool spent(const std::string& serial) const;
  std::size_t size() const { return entries_.size(); }

  void record_issue(const std::string& serial, std::int64_t issued_at);
  void mark_spent(const std::string& serial);

  std::vector<LedgerEntry> entries() const;

 private:
  void append_line(const LedgerEntry& e);

  std::string path_;  // empty = memory only
  std::unordered_map<std::string, LedgerEntry> entries_;
};

// Issuing bank: owns the secret spec, thresholds, the serial ledger and the
// challenge randomness.
class Bank {
 public:
  Bank(EncodingSpec spec, Thresholds thresholds, std::uint64_t seed);
  Bank(EncodingSpec spec, Thresholds thresholds, Ledger ledger, std::uint64_t seed);

  const EncodingSpec& spec() const { return spec_; }
  const Thresholds& thresholds() const { return thresholds_; }
  Ledger& ledger() { return ledger_; }

  // when on, accepted serials are marked spent and refuse new challenges
  void set_double_spend_protection(bool on) { double_spend_ = on; }
  bool double_spend_protection() const { return double_spend_; }

  Token issue(const std::string& serial);        // throws on duplicate serial
  Challenge challenge(const std::string& serial);  // throws on unknown/spent serial
  Verdict verify_response(const Challenge& challenge, const Response& response);

 private:
  EncodingSpec spec_;
  Thresholds thresholds_;
  Ledger ledger_;
  RngStream rng_;
  bool double_spend_ = false;
};

}  // namespace qrg
