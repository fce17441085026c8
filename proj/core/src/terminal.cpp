#include "qrg/terminal.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace qrg {

namespace {

void check_lengths(const Token& token, const Challenge& challenge) {
  if (token.serial != challenge.serial)
    throw std::invalid_argument("token/challenge serial mismatch");
  if (token.pairs.size() != challenge.bases.size())
    throw std::invalid_argument("token/challenge length mismatch");
}

}  // namespace

Response honest_respond(const Token& token, const Challenge& challenge, RngStream& rng) {
  check_lengths(token, challenge);
  Response r;
  r.serial = token.serial;
  r.outcomes.reserve(token.pairs.size());
  for (std::size_t i = 0; i < token.pairs.size(); ++i) {
    const Basis b = challenge.bases[i];
    PairOutcome out;
    out.q1 = measure(token.pairs[i].first, b, rng);
    out.q2 = measure(token.pairs[i].second, b, rng);
    r.outcomes.push_back(out);
  }
  return r;
}

TerminalOutput attack_respond(StrategyId st, const CloneParams& cp, const Token& token,
                              const Challenge& challenge, RngStream& rng) {
  check_lengths(token, challenge);
  validate(cp);

  TerminalOutput out;
  out.response.serial = token.serial;
  out.response.outcomes.reserve(token.pairs.size());
  out.records.reserve(token.pairs.size());

  for (std::size_t i = 0; i < token.pairs.size(); ++i) {
    const Basis b = challenge.bases[i];
    SniffRecord rec;
    rec.serial = token.serial;
    rec.pair_index = static_cast<int>(i);
    rec.basis = b;
    PairOutcome po;

    if (st == StrategyId::NoCloning) {
      const int m1 = measure(token.pairs[i].first, b, rng);
      const int m2 = measure(token.pairs[i].second, b, rng);
      po.q1 = m1;
      po.q2 = m2;
      rec.q1 = SniffQubit::single(m1);
      rec.q2 = SniffQubit::single(m2);
    } else {
      const QubitCloneOutcome o1 = clone_and_measure_qubit(token.pairs[i].first, b, cp, rng);
      const QubitCloneOutcome o2 = clone_and_measure_qubit(token.pairs[i].second, b, cp, rng);
      rec.q1 = SniffQubit::from_outcome(o1);
      rec.q2 = SniffQubit::from_outcome(o2);
      if (st == StrategyId::AlwaysAnswer) {
        po.q1 = o1.lost ? rng.bit() : o1.bit_a;
        po.q2 = o2.lost ? rng.bit() : o2.bit_a;
      } else {  // ReportLoss
        if (!o1.lost) po.q1 = o1.bit_a;
        if (!o2.lost) po.q2 = o2.bit_a;
      }
    }

    out.response.outcomes.push_back(po);
    out.records.push_back(std::move(rec));
  }
  return out;
}

namespace {

nlohmann::json qubit_to_json(const SniffQubit& q) {
  switch (q.kind) {
    case SniffQubit::Kind::Lost:
      return nullptr;
    case SniffQubit::Kind::Clones:
      return nlohmann::json::array({q.a, q.b});
    case SniffQubit::Kind::Single:
      return nlohmann::json::array({q.a});
  }
  throw std::invalid_argument("bad SniffQubit");
}

SniffQubit qubit_from_json(const nlohmann::json& j) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw std::invalid_argument("sniff qubit must be null or an array");
  if (j.size() == 1) return SniffQubit::single(j[0].get<int>());
  if (j.size() == 2) return {SniffQubit::Kind::Clones, j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>()};
  throw std::invalid_argument("sniff qubit array must have one or two bits");
}

}  // namespace

std::string sniff_to_json(const SniffRecord& r) {
  nlohmann::json j;
  j["serial"] = r.serial;
  j["pair"] = r.pair_index;
  j["basis"] = std::string(1, to_char(r.basis));
  j["q1"] = qubit_to_json(r.q1);
  j["q2"] = qubit_to_json(r.q2);
  return j.dump();
}

SniffRecord sniff_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  SniffRecord r;
  r.serial = j.at("serial").get<std::string>();
  r.pair_index = j.at("pair").get<int>();
  const auto basis = j.at("basis").get<std::string>();
  if (basis.size() != 1) throw std::invalid_argument("bad basis field");
  r.basis = basis_from_char(basis[0]);
  r.q1 = qubit_from_json(j.at("q1"));
  r.q2 = qubit_from_json(j.at("q2"));
  return r;
}

void write_sniff_log(std::ostream& os, std::span<const SniffRecord> records) {
  for (const SniffRecord& r : records) os << sniff_to_json(r) << '\n';
}

std::vector<SniffRecord> read_sniff_log(std::istream& is) {
  std::vector<SniffRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(sniff_from_json(line));
  }
  return out;
}

}  // namespace qrg
