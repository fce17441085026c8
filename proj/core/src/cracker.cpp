#include "qrg/cracker.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

namespace qrg {

namespace {

bool is_honest_record(const SniffRecord& r) {
  return r.q1.kind == SniffQubit::Kind::Single || r.q2.kind == SniffQubit::Kind::Single;
}

QubitState qubit_at(const PairState& p, int position) {
  if (position == 1) return p.first;
  if (position == 2) return p.second;
  throw std::invalid_argument("constraint position must be 1 or 2");
}

}  // namespace

std::vector<Constraint> extract_constraints(std::span<const SniffRecord> log) {
  std::vector<Constraint> out;
  for (const SniffRecord& r : log) {
    if (is_honest_record(r)) continue;
    const Inference inf = classify_pair(r.q1.to_outcome(), r.q2.to_outcome(), r.basis);
    if (inf.kind != Inference::Kind::SixEliminated) continue;
    out.push_back({r.serial, r.pair_index, inf.position, inf.state});
  }
  return out;
}

std::vector<InferenceRecord> extract_inferences(std::span<const SniffRecord> log) {
  std::vector<InferenceRecord> out;
  for (const SniffRecord& r : log) {
    if (is_honest_record(r)) continue;
    out.push_back({r.serial, r.pair_index, classify_pair(r.q1.to_outcome(), r.q2.to_outcome(), r.basis)});
  }
  return out;
}

CandidateScore agreements(const EncodingSpec& candidate, std::span<const Constraint> constraints) {
  CandidateScore score;
  score.hash = candidate.hash;
  score.salt = candidate.salt;
  score.evaluated = static_cast<std::int64_t>(constraints.size());
  for (const Constraint& c : constraints) {
    const PairState predicted = predict_pair(candidate, c.serial, c.pair_index);
    if (qubit_at(predicted, c.position) == c.state) ++score.agreements;
  }
  return score;
}

double weighted_agreements(const EncodingSpec& candidate, std::span<const InferenceRecord> records,
                           double four_candidate_weight) {
  double total = 0.0;
  for (const InferenceRecord& r : records) {
    switch (r.inference.kind) {
      case Inference::Kind::SixEliminated: {
        const PairState predicted = predict_pair(candidate, r.serial, r.pair_index);
        if (qubit_at(predicted, r.inference.position) == r.inference.state) total += 1.0;
        break;
      }
      case Inference::Kind::FourCandidates: {
        const PairState predicted = predict_pair(candidate, r.serial, r.pair_index);
        const auto& cand = r.inference.candidates;
        if (std::find(cand.begin(), cand.end(), predicted) != cand.end())
          total += four_candidate_weight;
        break;
      }
      case Inference::Kind::NoInference:
        break;
    }
  }
  return total;
}

std::vector<ConstraintBatch> batch_by_serial(std::span<const Constraint> constraints,
                                             int pairs_per_serial) {
  std::vector<ConstraintBatch> out;
  for (const Constraint& c : constraints) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ConstraintBatch& b) { return b.serial == c.serial; });
    if (it == out.end()) {
      out.push_back({c.serial, 0, {}});
      it = std::prev(out.end());
    }
    it->constraints.push_back(c);
  }
  for (ConstraintBatch& b : out)
    b.pairs_seen = pairs_per_serial > 0 ? pairs_per_serial : static_cast<int>(b.constraints.size());
  return out;
}

void validate(const RecoverySettings& s) {
  if (!(s.z_multiple > 0)) throw std::invalid_argument("z_multiple must be positive");
  if (s.prune_every < 1) throw std::invalid_argument("prune_every must be at least 1");
  if (!(s.keep_fraction > 0 && s.keep_fraction <= 1))
    throw std::invalid_argument("keep_fraction must lie in (0, 1]");
  if (s.max_pairs < 0) throw std::invalid_argument("max_pairs must be nonnegative");
}

namespace {

// Tally one candidate over constraints grouped into runs of equal serial:
// one keystream computation covers every constraint of the run.
std::int64_t tally_one(const EncodingSpec& spec, std::span<const Constraint> constraints) {
  std::int64_t hits = 0;
  const std::string* current = nullptr;
  std::vector<std::uint8_t> bytes;
  for (const Constraint& c : constraints) {
    if (current == nullptr || *current != c.serial) {
      bytes = keystream(spec, c.serial);
      current = &c.serial;
    }
    const PairState predicted = pair_from_index(bytes[static_cast<std::size_t>(c.pair_index)] % 8);
    if (qubit_at(predicted, c.position) == c.state) ++hits;
  }
  return hits;
}

}  // namespace

std::vector<std::int64_t> score_candidates(std::span<const Candidate> candidates,
                                           std::span<const Constraint> constraints,
                                           int n_threads) {
  std::vector<std::int64_t> tallies(candidates.size(), 0);
  if (candidates.empty() || constraints.empty()) return tallies;

  int needed = 0;
  for (const Constraint& c : constraints) {
    if (c.pair_index < 0) throw std::invalid_argument("negative pair index");
    needed = std::max(needed, c.pair_index + 1);
  }

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const EncodingSpec spec{candidates[i].hash, candidates[i].salt, needed, needed};
      tallies[i] = tally_one(spec, constraints);
    }
  };

  std::size_t workers = n_threads > 0 ? static_cast<std::size_t>(n_threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, candidates.size());
  if (workers <= 1) {
    worker(0, candidates.size());
    return tallies;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (candidates.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(begin + chunk, candidates.size());
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (std::thread& t : pool) t.join();
  return tallies;
}

namespace {

// Survivor indices ordered by agreement count descending, ties by candidate
// index ascending (alive is kept sorted, the sort is stable).
std::vector<std::size_t> ranked(const std::vector<std::size_t>& alive,
                                const std::vector<std::int64_t>& counts) {
  std::vector<std::size_t> order(alive.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return counts[alive[x]] > counts[alive[y]];
  });
  return order;
}

}  // namespace

RecoveryResult recover(std::span<const ConstraintBatch> batches, std::span<const HashId> hashes,
                       std::span<const std::string> salt_space, const RecoverySettings& settings) {
  validate(settings);
  if (hashes.empty() || salt_space.empty()) throw std::invalid_argument("empty candidate space");

  std::vector<Candidate> candidates;
  candidates.reserve(hashes.size() * salt_space.size());
  for (const HashId h : hashes)
    for (const std::string& s : salt_space) candidates.push_back({h, s});

  std::vector<std::int64_t> counts(candidates.size(), 0);
  std::vector<std::size_t> alive(candidates.size());
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  RecoveryResult result;
  std::int64_t consumed_constraints = 0;
  int consumed_batches = 0;

  auto finish = [&](std::size_t winner, bool found) {
    result.found = found;
    result.hash = candidates[winner].hash;
    result.salt = candidates[winner].salt;
    result.score = {result.hash, result.salt, counts[winner], consumed_constraints};
    return result;
  };

  std::vector<Candidate> scratch;
  for (const ConstraintBatch& batch : batches) {
    if (settings.max_pairs > 0 && result.pairs_consumed + batch.pairs_seen > settings.max_pairs)
      break;
    result.pairs_consumed += batch.pairs_seen;
    consumed_constraints += static_cast<std::int64_t>(batch.constraints.size());

    scratch.clear();
    for (const std::size_t idx : alive) scratch.push_back(candidates[idx]);
    const std::vector<std::int64_t> tallies = score_candidates(scratch, batch.constraints);
    for (std::size_t i = 0; i < alive.size(); ++i) counts[alive[i]] += tallies[i];

    if (++consumed_batches % settings.prune_every != 0) continue;

    const std::vector<std::size_t> order = ranked(alive, counts);
    const std::size_t leader = alive[order[0]];
    const std::size_t rest_n = order.size() - 1;
    if (rest_n >= 2) {
      double mean = 0.0;
      for (std::size_t i = 1; i < order.size(); ++i)
        mean += static_cast<double>(counts[alive[order[i]]]);
      mean /= static_cast<double>(rest_n);
      double var = 0.0;
      for (std::size_t i = 1; i < order.size(); ++i) {
        const double d = static_cast<double>(counts[alive[order[i]]]) - mean;
        var += d * d;
      }
      const double stddev = std::sqrt(var / static_cast<double>(rest_n - 1));
      if (stddev > 0 &&
          static_cast<double>(counts[leader]) > mean + settings.z_multiple * stddev)
        return finish(leader, true);
    }

    const auto kept =
        static_cast<std::size_t>(std::ceil(settings.keep_fraction * static_cast<double>(alive.size())));
    std::vector<std::size_t> next;
    next.reserve(kept);
    for (std::size_t i = 0; i < kept && i < order.size(); ++i) next.push_back(alive[order[i]]);
    std::sort(next.begin(), next.end());
    alive = std::move(next);
  }

  const std::vector<std::size_t> order = ranked(alive, counts);
  return finish(alive[order[0]], false);
}

RecoveryResult generalized_recover(std::span<const ConstraintBatch> batches,
                                   std::span<const std::string> salt_space,
                                   const RecoverySettings& settings) {
  return recover(batches, kAllHashes, salt_space, settings);
}

EncodingSpec recovered_spec(const RecoveryResult& result, const EncodingSpec& geometry) {
  if (!result.found) throw std::invalid_argument("recovery did not converge on a secret");
  return {result.hash, result.salt, geometry.keystream_len, geometry.pairs_per_token};
}

Token counterfeit(const EncodingSpec& recovered, std::string serial) {
  return mint_token(recovered, std::move(serial));
}

void write_constraints_csv(std::ostream& os, std::span<const Constraint> constraints) {
  os << "serial,pair,position,state\n";
  for (const Constraint& c : constraints)
    os << c.serial << ',' << c.pair_index << ',' << c.position << ',' << to_string(c.state) << '\n';
}

std::vector<Constraint> read_constraints_csv(std::istream& is) {
  std::vector<Constraint> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "serial,pair,position,state") continue;
    }
    std::istringstream row(line);
    std::string serial, pair, position, state;
    if (!std::getline(row, serial, ',') || !std::getline(row, pair, ',') ||
        !std::getline(row, position, ',') || !std::getline(row, state))
      throw std::invalid_argument("malformed constraint row: " + line);
    Constraint c;
    c.serial = serial;
    c.pair_index = std::stoi(pair);
    c.position = std::stoi(position);
    if (c.position != 1 && c.position != 2)
      throw std::invalid_argument("constraint position must be 1 or 2");
    c.state = state_from_string(state);
    out.push_back(std::move(c));
  }
  return out;
}

std::string result_to_json(const RecoveryResult& r) {
  nlohmann::json j;
  j["found"] = r.found;
  j["hash"] = to_string(r.hash);
  j["salt"] = r.salt;
  j["agreements"] = r.score.agreements;
  j["evaluated"] = r.score.evaluated;
  j["pairs_consumed"] = r.pairs_consumed;
  return j.dump();
}

RecoveryResult result_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RecoveryResult r;
  r.found = j.at("found").get<bool>();
  r.hash = hash_from_string(j.at("hash").get<std::string>());
  r.salt = j.at("salt").get<std::string>();
  r.score.hash = r.hash;
  r.score.salt = r.salt;
  r.score.agreements = j.at("agreements").get<std::int64_t>();
  r.score.evaluated = j.at("evaluated").get<std::int64_t>();
  r.pairs_consumed = j.at("pairs_consumed").get<std::int64_t>();
  return r;
}

}  // namespace qrg
