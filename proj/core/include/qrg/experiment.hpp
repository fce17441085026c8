#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qrg/bank.hpp"
#include "qrg/clonesim.hpp"
#include "qrg/cracker.hpp"
#include "qrg/infotheory.hpp"
#include "qrg/mint.hpp"
#include "qrg/net.hpp"
#include "qrg/terminal.hpp"

namespace qrg {

// Everything one seeded run needs.
struct RunConfig {
  std::uint64_t seed = 1;
  CloneParams clone{0.803, 1.0 / 3.0};
  StrategyId strategy = StrategyId::ReportLoss;
  EncodingSpec spec{HashId::HmacSha512, "042", 40, 40};
  int serials = 101;
  int salt_digits = 3;  // search space = all decimal strings of this width
  Thresholds thresholds{};
  RecoverySettings recovery{};
  bool post_select = true;   // sample the cloner conditioned on success
  bool generalized = false;  // search all four hash functions
};

void validate(const RunConfig& cfg);  // throws std::invalid_argument

// "000", "001", ...: decimals zero-padded to max(width, digits required)
std::vector<std::string> make_serials(int count, int width = 3);

// every decimal string of exactly `digits` digits, ascending
std::vector<std::string> make_salt_space(int digits);

struct CurveRequest {
  StrategyId strategy = StrategyId::ReportLoss;
  double success = 1.0 / 3.0;
  double f_lo = 0.5;
  double f_hi = 1.0;
  int points = 51;
  bool conditional = false;
};

// CSV text of the error/information trade-off curve
std::string run_curves(const CurveRequest& req);

struct AttackRun {
  std::vector<SniffRecord> records;
  std::vector<ConstraintBatch> batches;
  RecoveryResult result;
  int tokens_presented = 0;
  int tokens_accepted = 0;
};

// The whole compromised-terminal pipeline: issue every serial, answer the
// bank's challenges through the cloning terminal, harvest constraints, run
// the salt search. With post_select on, the cloning channel is sampled
// conditioned on success (every pair yields clones, as in a coincidence-
// filtered record) and the pair budget counts those post-selected pairs.
AttackRun run_attack(const RunConfig& cfg);

struct Table1Row {
  HashId hash = HashId::HmacSha512;
  double mean_pairs = 0;
  double std_error = 0;  // sample stddev / sqrt(trials)
  int trials = 0;
};

// Minimal sufficient pair budget per hash function, averaged over seeded
// trials. The minimum is exact: recovery succeeds at a budget iff the
// budget admits every batch up to the one whose prune event fires, so the
// uncapped run's pairs_consumed is the least sufficient budget.
std::vector<Table1Row> run_table1(const RunConfig& cfg, int trials);

// CSV: hash,mean_pairs,std_error,trials
void write_table1_csv(std::ostream& os, std::span<const Table1Row> rows);

// Bank preloaded with the run's serials (skips ones the ledger already has).
Bank make_bank(const RunConfig& cfg);
Bank make_bank(const RunConfig& cfg, Ledger ledger);

struct TransactReport {
  int sessions = 0;
  int accepted = 0;
  double acceptance_fraction = 0;
  double mean_error_rate = 0;
  double mean_loss_rate = 0;
};

// Spend each serial once against a bank service: honest terminal or the
// configured attack strategy. The client mints its own copy of each token
// (same spec), standing in for the customer's card.
TransactReport run_transact(const RunConfig& cfg, const Endpoint& ep, bool honest);

}  // namespace qrg
