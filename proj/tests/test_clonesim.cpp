#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qrg/clonesim.hpp"
#include "support.hpp"

using namespace qrg;

namespace {

const std::array<QubitState, 4> kStates = {QubitState::Zero, QubitState::One,
                                           QubitState::Plus, QubitState::Minus};

const std::array<QubitCloneOutcome, 5> kOutcomes = {
    QubitCloneOutcome::make_lost(), QubitCloneOutcome::make_bits(0, 0),
    QubitCloneOutcome::make_bits(0, 1), QubitCloneOutcome::make_bits(1, 0),
    QubitCloneOutcome::make_bits(1, 1)};

int outcome_index(const QubitCloneOutcome& o) {
  if (o.lost) return 0;
  return 1 + 2 * o.bit_a + o.bit_b;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(CloneParams{0.5, 1.0}));
  CHECK_NOTHROW(validate(CloneParams{1.0, 0.001}));
  CHECK_THROWS_AS(validate(CloneParams{0.49, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CloneParams{1.01, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CloneParams{0.8, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CloneParams{0.8, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CloneParams{0.8, -0.1}), std::invalid_argument);
}

TEST_CASE("physical constants") {
  CHECK(kCloneFidelityCeiling == doctest::Approx(0.5 * (1 + 1 / std::sqrt(2.0))).epsilon(1e-15));
  CHECK(kCloneFidelityCeiling == 0.85355339059327373);
  CHECK(kClassicalFidelity == 0.75);
  CHECK(kLinearOpticsSuccess == 1.0 / 3.0);
}

TEST_CASE("strategy names") {
  CHECK(to_string(StrategyId::AlwaysAnswer) == "i");
  CHECK(to_string(StrategyId::ReportLoss) == "ii");
  CHECK(to_string(StrategyId::NoCloning) == "iii");
  for (const auto st : {StrategyId::AlwaysAnswer, StrategyId::ReportLoss, StrategyId::NoCloning})
    CHECK(strategy_from_string(to_string(st)) == st);
  CHECK_THROWS_AS(strategy_from_string("iv"), std::invalid_argument);
  CHECK_THROWS_AS(strategy_from_string(""), std::invalid_argument);
}

TEST_CASE("perfect matched cloning is deterministic") {
  RngStream rng(5);
  const CloneParams perfect{1.0, 1.0};
  for (int rep = 0; rep < 100; ++rep) {
    CHECK(clone_and_measure_qubit(QubitState::Zero, Basis::Z, perfect, rng) ==
          QubitCloneOutcome::make_bits(0, 0));
    CHECK(clone_and_measure_qubit(QubitState::One, Basis::Z, perfect, rng) ==
          QubitCloneOutcome::make_bits(1, 1));
    CHECK(clone_and_measure_qubit(QubitState::Minus, Basis::X, perfect, rng) ==
          QubitCloneOutcome::make_bits(1, 1));
  }
}

TEST_CASE("clone outcome pmf matches the independent per-qubit model") {
  for (const double F : {0.5, 0.75, 0.803, 0.854, 1.0}) {
    for (const double P : {1.0 / 3.0, 0.7, 1.0}) {
      const CloneParams cp{F, P};
      for (const auto s : kStates) {
        for (const auto b : {Basis::Z, Basis::X}) {
          const auto pmf = clone_outcome_pmf(s, b, cp);
          const auto oracle = support::qubit_pmf(basis_of(s) == b, bit_of(s), F, P);
          double total = 0;
          for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(pmf[static_cast<std::size_t>(i)] -
                           oracle[static_cast<std::size_t>(i)]) <= 1e-15);
            total += pmf[static_cast<std::size_t>(i)];
          }
          CHECK(std::abs(total - 1.0) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sampled clone outcomes follow the pmf") {
  const int n = 100000;

  // loss channel alone (df 1)
  {
    RngStream rng(21);
    const CloneParams cp{0.854, 1.0 / 3.0};
    std::int64_t lost = 0;
    for (int i = 0; i < n; ++i)
      lost += clone_and_measure_qubit(QubitState::Zero, Basis::Z, cp, rng).lost;
    const std::array<std::int64_t, 2> obs = {lost, n - lost};
    const std::array<double, 2> p = {2.0 / 3.0, 1.0 / 3.0};
    CHECK(support::chi_square(obs, p, n) < support::kChi2Crit1);
  }

  // matched-basis bit pattern at full success (df 3)
  {
    RngStream rng(22);
    const CloneParams cp{0.854, 1.0};
    std::array<std::int64_t, 4> counts{};
    for (int i = 0; i < n; ++i) {
      const auto o = clone_and_measure_qubit(QubitState::One, Basis::Z, cp, rng);
      REQUIRE_FALSE(o.lost);
      counts[static_cast<std::size_t>(outcome_index(o) - 1)]++;
    }
    const auto pmf = clone_outcome_pmf(QubitState::One, Basis::Z, cp);
    const std::array<double, 4> p = {pmf[1], pmf[2], pmf[3], pmf[4]};
    CHECK(support::chi_square(counts, p, n) < support::kChi2Crit3);
  }

  // conjugate-basis clones are independent fair coins (df 3)
  {
    RngStream rng(23);
    const CloneParams cp{0.854, 1.0};
    std::array<std::int64_t, 4> counts{};
    for (int i = 0; i < n; ++i) {
      const auto o = clone_and_measure_qubit(QubitState::Plus, Basis::Z, cp, rng);
      counts[static_cast<std::size_t>(outcome_index(o) - 1)]++;
    }
    const std::array<double, 4> p = {0.25, 0.25, 0.25, 0.25};
    CHECK(support::chi_square(counts, p, n) < support::kChi2Crit3);
  }
}

TEST_CASE("elimination event probabilities") {
  const EventProbs ep = event_probabilities(CloneParams{0.854, 1.0 / 3.0});
  CHECK(std::abs(ep.p_correct - 0.04051755555555555) <= 1e-15);
  CHECK(std::abs(ep.p_error - 0.015038000000000001) <= 1e-15);
  CHECK(std::abs(ep.p_total - 0.05555555555555555) <= 1e-15);

  // any-event probability is P^2/2 and splits exactly into correct + error
  for (const double F : {0.5, 0.7, 0.803, 0.854, 1.0}) {
    for (const double P : {0.2, 1.0 / 3.0, 1.0}) {
      const EventProbs e = event_probabilities(CloneParams{F, P});
      CHECK(std::abs(e.p_total - P * P / 2) <= 1e-15);
      CHECK(std::abs(e.p_correct + e.p_error - e.p_total) <= 1e-15);
      CHECK(std::abs(e.p_correct - 0.5 * P * P * F * F) <= 1e-15);
      CHECK(std::abs(e.p_error - (0.5 * P * P * (1 - F) * (1 - F) + P * P * F * (1 - F))) <=
            1e-15);
      // truth wins iff F^2 >= 1 - F^2
      if (F >= 1 / std::sqrt(2.0)) CHECK(e.p_correct >= e.p_error - 1e-15);
    }
  }

  // perfect cloning never produces erroneous eliminations
  const EventProbs perfect = event_probabilities(CloneParams{1.0, 1.0});
  CHECK(perfect.p_error == 0.0);
  CHECK(std::abs(perfect.p_correct - 0.5) <= 1e-15);
}

TEST_CASE("bank-side error rates per strategy") {
  CHECK(std::abs(error_rate(StrategyId::AlwaysAnswer, CloneParams{0.854, 1.0 / 3.0}) - 0.382) <=
        1e-9);
  CHECK(std::abs(error_rate(StrategyId::ReportLoss, CloneParams{0.803, 1.0 / 3.0}) - 0.197) <=
        1e-9);
  CHECK(error_rate(StrategyId::NoCloning, CloneParams{0.803, 1.0 / 3.0}) == 0.0);

  // answering every pair can only add noise; error falls as fidelity rises
  double prev_i = 1, prev_ii = 1;
  for (const double F : {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    const CloneParams cp{F, 1.0 / 3.0};
    const double ei = error_rate(StrategyId::AlwaysAnswer, cp);
    const double eii = error_rate(StrategyId::ReportLoss, cp);
    CHECK(ei >= eii);
    CHECK(ei <= prev_i + 1e-15);
    CHECK(eii <= prev_ii + 1e-15);
    prev_i = ei;
    prev_ii = eii;
  }
  // reporting losses hides the substitution noise entirely
  CHECK(error_rate(StrategyId::ReportLoss, CloneParams{0.803, 0.01}) ==
        error_rate(StrategyId::ReportLoss, CloneParams{0.803, 1.0}));
}

TEST_CASE("pair classification examples") {
  // second qubit's clones agree on 1 under a Z challenge
  const Inference a = classify_pair(QubitCloneOutcome::make_bits(0, 1),
                                    QubitCloneOutcome::make_bits(1, 1), Basis::Z);
  CHECK(a.kind == Inference::Kind::SixEliminated);
  CHECK(a.position == 2);
  CHECK(a.state == QubitState::One);

  // both agree: four survivors, ascending
  const Inference b = classify_pair(QubitCloneOutcome::make_bits(0, 0),
                                    QubitCloneOutcome::make_bits(1, 1), Basis::Z);
  CHECK(b.kind == Inference::Kind::FourCandidates);
  CHECK(pair_index(b.candidates[0]) == 0);  // 0+
  CHECK(pair_index(b.candidates[1]) == 1);  // 0-
  CHECK(pair_index(b.candidates[2]) == 6);  // +1
  CHECK(pair_index(b.candidates[3]) == 7);  // -1

  // both disagree
  CHECK(classify_pair(QubitCloneOutcome::make_bits(0, 1), QubitCloneOutcome::make_bits(1, 0),
                      Basis::Z)
            .kind == Inference::Kind::NoInference);

  // a loss blanks the pair even when the other qubit agrees
  CHECK(classify_pair(QubitCloneOutcome::make_lost(), QubitCloneOutcome::make_bits(1, 1),
                      Basis::Z)
            .kind == Inference::Kind::NoInference);

  // X challenge pins an X state
  const Inference c = classify_pair(QubitCloneOutcome::make_bits(1, 1),
                                    QubitCloneOutcome::make_bits(0, 1), Basis::X);
  CHECK(c.kind == Inference::Kind::SixEliminated);
  CHECK(c.position == 1);
  CHECK(c.state == QubitState::Minus);
}

TEST_CASE("classification matches a brute-force restatement on all inputs") {
  for (const auto b : {Basis::Z, Basis::X}) {
    for (const auto& o1 : kOutcomes) {
      for (const auto& o2 : kOutcomes) {
        const Inference inf = classify_pair(o1, o2, b);
        const bool a1 = o1.agree(), a2 = o2.agree();
        if (o1.lost || o2.lost || (!a1 && !a2)) {
          CHECK(inf.kind == Inference::Kind::NoInference);
        } else if (a1 && a2) {
          CHECK(inf.kind == Inference::Kind::FourCandidates);
          std::vector<PairState> expected;
          for (int k = 0; k < kPairStates; ++k) {
            const PairState p = pair_from_index(k);
            if (p.first == make_state(b, o1.bit_a) || p.second == make_state(b, o2.bit_a))
              expected.push_back(p);
          }
          REQUIRE(expected.size() == 4);
          for (int k = 0; k < 4; ++k)
            CHECK(inf.candidates[static_cast<std::size_t>(k)] ==
                  expected[static_cast<std::size_t>(k)]);
        } else {
          CHECK(inf.kind == Inference::Kind::SixEliminated);
          CHECK(inf.position == (a1 ? 1 : 2));
          CHECK(inf.state == make_state(b, a1 ? o1.bit_a : o2.bit_a));
        }
      }
    }
  }
}

TEST_CASE("perfect cloning never contradicts the encoding") {
  RngStream rng(31);
  const CloneParams perfect{1.0, 1.0};
  for (int rep = 0; rep < 10000; ++rep) {
    const PairState truth = pair_from_index(static_cast<int>(rng.below(8)));
    const Basis b = rng.bit() ? Basis::X : Basis::Z;
    const auto o1 = clone_and_measure_qubit(truth.first, b, perfect, rng);
    const auto o2 = clone_and_measure_qubit(truth.second, b, perfect, rng);
    const Inference inf = classify_pair(o1, o2, b);
    REQUIRE(inf.kind != Inference::Kind::NoInference);
    if (inf.kind == Inference::Kind::SixEliminated) {
      const QubitState pinned = inf.position == 1 ? truth.first : truth.second;
      CHECK(inf.state == pinned);
    } else {
      bool contains_truth = false;
      for (const auto& c : inf.candidates) contains_truth |= c == truth;
      CHECK(contains_truth);
    }
  }
}

TEST_CASE("elimination events occur half the time when both qubits survive") {
  // P(exactly one qubit's clones agree | both cloned) = 1/2 at any fidelity
  for (const double F : {0.5, 0.7, 0.803, 0.854, 0.99}) {
    const CloneParams cp{F, 1.0};
    for (int k = 0; k < kPairStates; ++k) {
      const PairState p = pair_from_index(k);
      for (const auto b : {Basis::Z, Basis::X}) {
        const auto pmf1 = clone_outcome_pmf(p.first, b, cp);
        const auto pmf2 = clone_outcome_pmf(p.second, b, cp);
        const double agree1 = pmf1[1] + pmf1[4];
        const double agree2 = pmf2[1] + pmf2[4];
        const double exactly_one = agree1 * (1 - agree2) + (1 - agree1) * agree2;
        CHECK(std::abs(exactly_one - 0.5) <= 1e-15);
      }
    }
  }
}

TEST_CASE("event frequencies match the closed forms in simulation") {
  const CloneParams cp{0.854, 1.0 / 3.0};
  const EventProbs ep = event_probabilities(cp);
  RngStream rng(41);
  const int n = 100000;
  std::int64_t correct = 0, error = 0;
  for (int i = 0; i < n; ++i) {
    const PairState truth = pair_from_index(static_cast<int>(rng.below(8)));
    const Basis b = rng.bit() ? Basis::X : Basis::Z;
    const auto o1 = clone_and_measure_qubit(truth.first, b, cp, rng);
    const auto o2 = clone_and_measure_qubit(truth.second, b, cp, rng);
    const Inference inf = classify_pair(o1, o2, b);
    if (inf.kind != Inference::Kind::SixEliminated) continue;
    const QubitState pinned = inf.position == 1 ? truth.first : truth.second;
    (inf.state == pinned ? correct : error)++;
  }
  // ~4.5 sigma bands at n = 1e5
  CHECK(std::abs(static_cast<double>(correct) / n - ep.p_correct) < 0.0030);
  CHECK(std::abs(static_cast<double>(error) / n - ep.p_error) < 0.0020);
  CHECK(std::abs(static_cast<double>(correct + error) / n - ep.p_total) < 0.0035);
}
