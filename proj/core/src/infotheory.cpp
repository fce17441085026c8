#include "qrg/infotheory.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace qrg {

namespace {

// shortest round-trip formatting, locale independent
void put_double(std::ostream& os, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  os.write(buf, res.ptr - buf);
}

JointTable cloning_table(const CloneParams& cp) {
  JointTable t;
  t.n_obs = 25;
  t.p.assign(static_cast<std::size_t>(kPairStates) * 25, 0.0);
  for (int e = 0; e < kPairStates; ++e) {
    const PairState ps = pair_from_index(e);
    const auto p1 = clone_outcome_pmf(ps.first, Basis::Z, cp);
    const auto p2 = clone_outcome_pmf(ps.second, Basis::Z, cp);
    for (int s1 = 0; s1 < 5; ++s1)
      for (int s2 = 0; s2 < 5; ++s2)
        t.at(e, s1 * 5 + s2) =
            p1[static_cast<std::size_t>(s1)] * p2[static_cast<std::size_t>(s2)] / kPairStates;
  }
  return t;
}

JointTable honest_table() {
  JointTable t;
  t.n_obs = 4;
  t.p.assign(static_cast<std::size_t>(kPairStates) * 4, 0.0);
  for (int e = 0; e < kPairStates; ++e) {
    const PairState ps = pair_from_index(e);
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2) {
        const double q1 =
            basis_of(ps.first) == Basis::Z ? (bit_of(ps.first) == b1 ? 1.0 : 0.0) : 0.5;
        const double q2 =
            basis_of(ps.second) == Basis::Z ? (bit_of(ps.second) == b2 ? 1.0 : 0.0) : 0.5;
        t.at(e, b1 * 2 + b2) = q1 * q2 / kPairStates;
      }
  }
  return t;
}

}  // namespace

JointTable observation_distribution(StrategyId st, const CloneParams& cp) {
  validate(cp);
  // strategies i and ii sniff identical clone data; they differ only in
  // what the terminal answers the bank
  if (st == StrategyId::NoCloning) return honest_table();
  return cloning_table(cp);
}

double mutual_information_bits(const JointTable& t) {
  std::vector<double> pe(kPairStates, 0.0);
  std::vector<double> po(static_cast<std::size_t>(t.n_obs), 0.0);
  for (int e = 0; e < kPairStates; ++e)
    for (int o = 0; o < t.n_obs; ++o) {
      pe[static_cast<std::size_t>(e)] += t.at(e, o);
      po[static_cast<std::size_t>(o)] += t.at(e, o);
    }
  double info = 0.0;
  for (int e = 0; e < kPairStates; ++e)
    for (int o = 0; o < t.n_obs; ++o) {
      const double p = t.at(e, o);
      if (p > 0.0)
        info += p * std::log2(p / (pe[static_cast<std::size_t>(e)] *
                                   po[static_cast<std::size_t>(o)]));
    }
  return info < 0.0 ? 0.0 : info;  // clamp numeric dust
}

double mutual_info_per_qubit(StrategyId st, const CloneParams& cp) {
  return mutual_information_bits(observation_distribution(st, cp)) / 2.0;
}

double conditional_mutual_info_per_qubit(const CloneParams& cp) {
  JointTable t = observation_distribution(StrategyId::ReportLoss, cp);
  JointTable cond;
  cond.n_obs = 16;
  cond.p.assign(static_cast<std::size_t>(kPairStates) * 16, 0.0);
  double total = 0.0;
  for (int e = 0; e < kPairStates; ++e)
    for (int s1 = 1; s1 < 5; ++s1)
      for (int s2 = 1; s2 < 5; ++s2) {
        const double v = t.at(e, s1 * 5 + s2);
        cond.at(e, (s1 - 1) * 4 + (s2 - 1)) = v;
        total += v;
      }
  if (total <= 0.0) throw std::domain_error("no fully cloned outcomes to condition on");
  for (double& v : cond.p) v /= total;
  return mutual_information_bits(cond) / 2.0;
}

std::vector<double> fidelity_grid(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    g[static_cast<std::size_t>(k)] = (lo * (points - 1 - k) + hi * k) / (points - 1);
  return g;
}

std::vector<CurvePoint> trade_off_curve(StrategyId st, double success,
                                        std::span<const double> f_grid, bool conditional) {
  if (st == StrategyId::NoCloning) {
    CurvePoint pt;
    pt.fidelity = 0.5;
    pt.error_rate = 0.0;
    pt.info_bits = mutual_info_per_qubit(st, CloneParams{0.5, success});
    pt.conditional = conditional;
    pt.physical = true;
    return {pt};
  }
  if (f_grid.empty()) throw std::invalid_argument("fidelity grid is empty");
  std::vector<CurvePoint> out;
  out.reserve(f_grid.size());
  for (double f : f_grid) {
    const CloneParams cp{f, success};
    validate(cp);
    CurvePoint pt;
    pt.fidelity = f;
    pt.error_rate = error_rate(st, cp);
    pt.info_bits =
        conditional ? conditional_mutual_info_per_qubit(cp) : mutual_info_per_qubit(st, cp);
    pt.conditional = conditional;
    pt.physical = f <= kCloneFidelityCeiling;
    out.push_back(pt);
  }
  return out;
}

void write_curve_csv(std::ostream& os, StrategyId st, double success,
                     std::span<const CurvePoint> pts) {
  os << "strategy,P,F,epsilon,I_bits_per_qubit,conditional,physical\n";
  for (const CurvePoint& pt : pts) {
    os << to_string(st) << ',';
    put_double(os, success);
    os << ',';
    put_double(os, pt.fidelity);
    os << ',';
    put_double(os, pt.error_rate);
    os << ',';
    put_double(os, pt.info_bits);
    os << ',' << (pt.conditional ? "true" : "false") << ','
       << (pt.physical ? "true" : "false") << '\n';
  }
}

}  // namespace qrg
