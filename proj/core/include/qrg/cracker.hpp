#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrg/clonesim.hpp"
#include "qrg/mint.hpp"
#include "qrg/terminal.hpp"

namespace qrg {

// One six-eliminated inference: qubit `position` (1 = first, 2 = second) of
// pair `pair_index` in token `serial` was pinned to `state`.
struct Constraint {
  std::string serial;
  int pair_index = 0;
  int position = 1;
  QubitState state{};

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Constraints from the records whose clones classify as SixEliminated.
// Four-candidate events, uninformative pairs and honest single-measurement
// records yield nothing.
std::vector<Constraint> extract_constraints(std::span<const SniffRecord> log);

// Full classification of each cloned record, for the weighted scoring
// variant that also credits four-candidate events.
struct InferenceRecord {
  std::string serial;
  int pair_index = 0;
  Inference inference{};
};

std::vector<InferenceRecord> extract_inferences(std::span<const SniffRecord> log);

struct CandidateScore {
  HashId hash = HashId::HmacSha512;
  std::string salt;
  std::int64_t agreements = 0;
  std::int64_t evaluated = 0;
};

// A constraint agrees with a candidate when the candidate's predicted pair
// carries the constrained state at the constrained position.
CandidateScore agreements(const EncodingSpec& candidate, std::span<const Constraint> constraints);

// Weighted variant: a six-eliminated agreement scores 1, a four-candidate
// event scores four_candidate_weight when the prediction is among the four
// survivors. recover() does not use this unless asked to.
double weighted_agreements(const EncodingSpec& candidate, std::span<const InferenceRecord> records,
                           double four_candidate_weight = 0.5);

// Constraints harvested from one serial, plus how many pairs the terminal
// handled to produce them (what recover() charges against max_pairs).
struct ConstraintBatch {
  std::string serial;
  int pairs_seen = 0;
  std::vector<Constraint> constraints;
};

// Group constraints per serial in first-appearance order. pairs_per_serial
// sets pairs_seen for every batch; pass 0 to charge one pair per constraint
// (all a bare constraint file can support).
std::vector<ConstraintBatch> batch_by_serial(std::span<const Constraint> constraints,
                                             int pairs_per_serial);

struct RecoverySettings {
  double z_multiple = 30.0;
  int prune_every = 10;  // serial batches between prune events
  double keep_fraction = 0.5;
  std::int64_t max_pairs = 0;  // pair budget; 0 = unlimited
};

void validate(const RecoverySettings& s);  // throws std::invalid_argument

struct RecoveryResult {
  bool found = false;
  HashId hash = HashId::HmacSha512;
  std::string salt;
  CandidateScore score;
  std::int64_t pairs_consumed = 0;
};

struct Candidate {
  HashId hash = HashId::HmacSha512;
  std::string salt;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Agreement tally of every candidate against one constraint list, in
// candidate order. n_threads = 0 picks a worker count automatically; the
// tallies are integers, so the split cannot change the result.
std::vector<std::int64_t> score_candidates(std::span<const Candidate> candidates,
                                           std::span<const Constraint> constraints,
                                           int n_threads = 0);

// Pruned search for the encoding secret. Batches are consumed in order
// while the pair budget lasts; every prune_every batches the survivor set is
// tested (leader agreements > mean + z_multiple * stddev of the other
// survivors) and then cut to the top keep_fraction. Exhausting the stream or
// the budget first returns the current leader with found = false.
// Candidates enumerate hash-major: (hashes[0], salts[0]), (hashes[0],
// salts[1]), ...; ties in agreement counts resolve to the earlier candidate.
RecoveryResult recover(std::span<const ConstraintBatch> batches, std::span<const HashId> hashes,
                       std::span<const std::string> salt_space, const RecoverySettings& settings);

// recover over all four HMAC functions times the salt space.
RecoveryResult generalized_recover(std::span<const ConstraintBatch> batches,
                                   std::span<const std::string> salt_space,
                                   const RecoverySettings& settings);

// Encoding spec implied by a successful recovery; token geometry (keystream
// length, pairs per token) is taken from `geometry`. Throws if !found.
EncodingSpec recovered_spec(const RecoveryResult& result, const EncodingSpec& geometry);

// Mint a token from a recovered spec. Identical bytes to the bank's minting.
Token counterfeit(const EncodingSpec& recovered, std::string serial);

// CSV with header serial,pair,position,state; states as 0/1/+/-.
void write_constraints_csv(std::ostream& os, std::span<const Constraint> constraints);
std::vector<Constraint> read_constraints_csv(std::istream& is);

// {"found","hash","salt","agreements","evaluated","pairs_consumed"}
std::string result_to_json(const RecoveryResult& r);
RecoveryResult result_from_json(std::string_view text);

}  // namespace qrg
