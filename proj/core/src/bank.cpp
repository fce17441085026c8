#include "qrg/bank.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qrg {

Challenge make_challenge(std::string serial, int n_pairs, RngStream& rng) {
  if (n_pairs < 1) throw std::invalid_argument("challenge needs at least one pair");
  Challenge c;
  c.serial = std::move(serial);
  c.bases.reserve(static_cast<std::size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) c.bases.push_back(rng.bit() ? Basis::X : Basis::Z);
  return c;
}

Verdict verify(const EncodingSpec& spec, const Challenge& challenge, const Response& response,
               const Thresholds& thresholds) {
  if (challenge.serial != response.serial)
    throw std::invalid_argument("challenge/response serial mismatch");
  if (challenge.bases.size() != response.outcomes.size())
    throw std::invalid_argument("challenge/response length mismatch");

  const Token token = mint_token(spec, challenge.serial);
  if (token.pairs.size() != challenge.bases.size())
    throw std::invalid_argument("challenge length does not match the token");

  int checked = 0, errors = 0, lost = 0;
  for (std::size_t i = 0; i < token.pairs.size(); ++i) {
    const PairState enc = token.pairs[i];
    const Basis b = challenge.bases[i];
    const PairOutcome& out = response.outcomes[i];
    if (!out.q1) ++lost;
    if (!out.q2) ++lost;
    // exactly one qubit of the pair is encoded in the challenged basis
    const bool first_matched = basis_of(enc.first) == b;
    const std::optional<int>& reported = first_matched ? out.q1 : out.q2;
    if (reported) {
      ++checked;
      const int truth = bit_of(first_matched ? enc.first : enc.second);
      if (*reported != truth) ++errors;
    }
  }

  Verdict v;
  v.checked_qubits = checked;
  v.error_rate = checked == 0 ? 0.0 : static_cast<double>(errors) / checked;
  v.loss_rate = static_cast<double>(lost) / (2.0 * static_cast<double>(token.pairs.size()));
  v.accepted = v.error_rate <= thresholds.max_error && v.loss_rate <= thresholds.max_loss;
  return v;
}

Ledger Ledger::open(const std::string& path) {
  Ledger led;
  led.path_ = path;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    LedgerEntry e;
    e.serial = j.at("serial").get<std::string>();
    e.issued_at = j.at("issued_at").get<std::int64_t>();
    e.spent = j.at("spent").get<bool>();
    led.entries_[e.serial] = e;  // latest line per serial wins
  }
  return led;
}

bool Ledger::contains(const std::string& serial) const { return entries_.count(serial) > 0; }

bool Ledger::spent(const std::string& serial) const {
  auto it = entries_.find(serial);
  return it != entries_.end() && it->second.spent;
}

void Ledger::record_issue(const std::string& serial, std::int64_t issued_at) {
  if (contains(serial)) throw std::invalid_argument("serial already issued: " + serial);
  LedgerEntry e{serial, issued_at, false};
  entries_[serial] = e;
  append_line(e);
}

void Ledger::mark_spent(const std::string& serial) {
  auto it = entries_.find(serial);
  if (it == entries_.end()) throw std::invalid_argument("unknown serial: " + serial);
  it->second.spent = true;
  append_line(it->second);
}

std::vector<LedgerEntry> Ledger::entries() const {
  std::vector<LedgerEntry> out;
  out.reserve(entries_.size());
  for (const auto& [_, e] : entries_) out.push_back(e);
  return out;
}

void Ledger::append_line(const LedgerEntry& e) {
  if (path_.empty()) return;
  nlohmann::json j;
  j["serial"] = e.serial;
  j["issued_at"] = e.issued_at;
  j["spent"] = e.spent;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to ledger: " + path_);
  out << j.dump() << '\n';
}

Bank::Bank(EncodingSpec spec, Thresholds thresholds, std::uint64_t seed)
    : Bank(std::move(spec), thresholds, Ledger{}, seed) {}

Bank::Bank(EncodingSpec spec, Thresholds thresholds, Ledger ledger, std::uint64_t seed)
    : spec_(std::move(spec)),
      thresholds_(thresholds),
      ledger_(std::move(ledger)),
      rng_(RootRng(seed).derive("bank-bases")) {
  validate(spec_);
}

Token Bank::issue(const std::string& serial) {
  ledger_.record_issue(serial, static_cast<std::int64_t>(std::time(nullptr)));
  return mint_token(spec_, serial);
}

Challenge Bank::challenge(const std::string& serial) {
  if (!ledger_.contains(serial)) throw std::invalid_argument("unknown serial: " + serial);
  if (double_spend_ && ledger_.spent(serial))
    throw std::invalid_argument("serial already spent: " + serial);
  return make_challenge(serial, spec_.pairs_per_token, rng_);
}

Verdict Bank::verify_response(const Challenge& challenge, const Response& response) {
  if (!ledger_.contains(challenge.serial))
    throw std::invalid_argument("unknown serial: " + challenge.serial);
  const Verdict v = verify(spec_, challenge, response, thresholds_);
  if (double_spend_ && v.accepted) ledger_.mark_spent(challenge.serial);
  return v;
}

}  // namespace qrg
