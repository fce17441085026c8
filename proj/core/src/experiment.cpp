#include "qrg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qrg {

void validate(const RunConfig& cfg) {
  validate(cfg.clone);
  validate(cfg.spec);
  validate(cfg.recovery);
  if (cfg.serials < 1) throw std::invalid_argument("need at least one serial");
  if (cfg.salt_digits < 1 || cfg.salt_digits > 7)
    throw std::invalid_argument("salt_digits must lie in [1, 7]");
  if (!(cfg.thresholds.max_error >= 0 && cfg.thresholds.max_error <= 1 &&
        cfg.thresholds.max_loss >= 0 && cfg.thresholds.max_loss <= 1))
    throw std::invalid_argument("thresholds must lie in [0, 1]");
}

namespace {

std::string decimal(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace

std::vector<std::string> make_serials(int count, int width) {
  if (count < 1) throw std::invalid_argument("need at least one serial");
  const int needed = static_cast<int>(std::to_string(count - 1).size());
  width = std::max(width, needed);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(decimal(i, width));
  return out;
}

std::vector<std::string> make_salt_space(int digits) {
  if (digits < 1 || digits > 7) throw std::invalid_argument("salt_digits must lie in [1, 7]");
  int count = 1;
  for (int i = 0; i < digits; ++i) count *= 10;
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(decimal(i, digits));
  return out;
}

std::string run_curves(const CurveRequest& req) {
  const std::vector<double> grid = fidelity_grid(req.f_lo, req.f_hi, req.points);
  const std::vector<CurvePoint> pts =
      trade_off_curve(req.strategy, req.success, grid, req.conditional);
  std::ostringstream os;
  write_curve_csv(os, req.strategy, req.success, pts);
  return os.str();
}

AttackRun run_attack(const RunConfig& cfg) {
  validate(cfg);
  const RootRng root(cfg.seed);
  Bank bank(cfg.spec, cfg.thresholds, cfg.seed);

  // post-selection = keep only pairs where both clones fired; sampling the
  // channel at success 1 with the same fidelity draws exactly that
  // conditional distribution
  CloneParams channel = cfg.clone;
  if (cfg.post_select) channel.success = 1.0;

  AttackRun run;
  const std::vector<std::string> serials = make_serials(cfg.serials);
  for (std::size_t i = 0; i < serials.size(); ++i) {
    const std::string& serial = serials[i];
    const Token token = bank.issue(serial);
    const Challenge ch = bank.challenge(serial);
    RngStream term = root.stream("terminal", i);
    TerminalOutput out = attack_respond(cfg.strategy, channel, token, ch, term);
    const Verdict v = bank.verify_response(ch, out.response);
    ++run.tokens_presented;
    if (v.accepted) ++run.tokens_accepted;

    ConstraintBatch batch;
    batch.serial = serial;
    batch.pairs_seen = cfg.spec.pairs_per_token;
    batch.constraints = extract_constraints(out.records);
    run.batches.push_back(std::move(batch));
    run.records.insert(run.records.end(), std::make_move_iterator(out.records.begin()),
                       std::make_move_iterator(out.records.end()));
  }

  const std::vector<std::string> space = make_salt_space(cfg.salt_digits);
  if (cfg.generalized) {
    run.result = generalized_recover(run.batches, space, cfg.recovery);
  } else {
    const HashId hashes[] = {cfg.spec.hash};
    run.result = recover(run.batches, hashes, space, cfg.recovery);
  }
  return run;
}

std::vector<Table1Row> run_table1(const RunConfig& cfg, int trials) {
  validate(cfg);
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  const RootRng root(cfg.seed);

  std::vector<Table1Row> rows;
  for (const HashId hash : kAllHashes) {
    std::vector<double> minima;
    for (int t = 0; t < trials; ++t) {
      RunConfig trial = cfg;
      trial.spec.hash = hash;
      trial.seed = root.derive("table1", static_cast<std::uint64_t>(t));
      trial.recovery.max_pairs = 0;  // uncapped run stops at the exact minimum
      const AttackRun run = run_attack(trial);
      if (!run.result.found || run.result.salt != cfg.spec.salt)
        throw std::runtime_error("recovery failed for " + to_string(hash) + " trial " +
                                 std::to_string(t));
      minima.push_back(static_cast<double>(run.result.pairs_consumed));
    }
    Table1Row row;
    row.hash = hash;
    row.trials = trials;
    for (const double m : minima) row.mean_pairs += m;
    row.mean_pairs /= static_cast<double>(trials);
    double var = 0;
    for (const double m : minima) var += (m - row.mean_pairs) * (m - row.mean_pairs);
    var /= static_cast<double>(trials - 1);
    row.std_error = std::sqrt(var / static_cast<double>(trials));
    rows.push_back(row);
  }
  return rows;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
  (void)ec;
}

}  // namespace

void write_table1_csv(std::ostream& os, std::span<const Table1Row> rows) {
  os << "hash,mean_pairs,std_error,trials\n";
  for (const Table1Row& r : rows) {
    std::string line = to_string(r.hash);
    line += ',';
    append_double(line, r.mean_pairs);
    line += ',';
    append_double(line, r.std_error);
    line += ',';
    line += std::to_string(r.trials);
    os << line << '\n';
  }
}

Bank make_bank(const RunConfig& cfg) { return make_bank(cfg, Ledger()); }

Bank make_bank(const RunConfig& cfg, Ledger ledger) {
  validate(cfg);
  Bank bank(cfg.spec, cfg.thresholds, std::move(ledger), cfg.seed);
  for (const std::string& serial : make_serials(cfg.serials))
    if (!bank.ledger().contains(serial)) bank.issue(serial);
  return bank;
}

TransactReport run_transact(const RunConfig& cfg, const Endpoint& ep, bool honest) {
  validate(cfg);
  const RootRng root(cfg.seed);
  BankClient client(ep);

  TransactReport report;
  const std::vector<std::string> serials = make_serials(cfg.serials);
  for (std::size_t i = 0; i < serials.size(); ++i) {
    const Token token = mint_token(cfg.spec, serials[i]);
    const Challenge ch = client.request_challenge(serials[i]);
    RngStream term = root.stream("terminal", i);
    const Response resp =
        honest ? honest_respond(token, ch, term)
               : attack_respond(cfg.strategy, cfg.clone, token, ch, term).response;
    const Verdict v = client.send_response(resp);
    ++report.sessions;
    if (v.accepted) ++report.accepted;
    report.mean_error_rate += v.error_rate;
    report.mean_loss_rate += v.loss_rate;
  }
  if (report.sessions > 0) {
    report.acceptance_fraction = static_cast<double>(report.accepted) / report.sessions;
    report.mean_error_rate /= report.sessions;
    report.mean_loss_rate /= report.sessions;
  }
  return report;
}

}  // namespace qrg
