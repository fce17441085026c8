#pragma once

// Shared helpers and independently-computed reference values. Everything
// here is derived from first principles or frozen from reference tools, not
// from the library under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace support {

// chi-square upper-tail criticals at p = 0.001
inline constexpr double kChi2Crit1 = 10.827566170662733;
inline constexpr double kChi2Crit3 = 16.26623619623813;
inline constexpr double kChi2Crit7 = 24.321886347856854;

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

inline double chi_square(std::span<const std::int64_t> observed, std::span<const double> expected_p,
                         std::int64_t total) {
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = expected_p[i] * static_cast<double>(total);
    const double d = static_cast<double>(observed[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// two-sample homogeneity statistic, df = cells - 1
inline double chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  double na = 0, nb = 0;
  for (const auto v : a) na += static_cast<double>(v);
  for (const auto v : b) nb += static_cast<double>(v);
  double stat = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pooled = (static_cast<double>(a[i]) + static_cast<double>(b[i])) / (na + nb);
    if (pooled == 0) continue;
    const double ea = pooled * na, eb = pooled * nb;
    const double da = static_cast<double>(a[i]) - ea, db = static_cast<double>(b[i]) - eb;
    stat += da * da / ea + db * db / eb;
  }
  return stat;
}

template <typename T>
double median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return static_cast<double>(v[n / 2]);
  return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

// ---------------------------------------------------------------------------
// Mutual-information oracle: exact enumeration built straight from the
// channel definition. Encodings are the eight ordered pairs over
// {0,1,+,-} with exactly one qubit in the computational basis; the
// challenged basis is Z; each cloned qubit yields one of five symbols
// {lost, 00, 01, 10, 11}.

// (first_is_z, bit1, bit2) in library pair-index order
inline constexpr std::array<std::array<int, 3>, 8> kEncodings = {{
    {1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1},
    {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
}};

// per-qubit symbol pmf for true bit `bit`; matched clones each equal the
// true bit w.p. F, conjugate clones are fair coins
inline std::array<double, 5> qubit_pmf(bool matched, int bit, double F, double P) {
  const double q1 = matched ? (bit == 0 ? F : 1 - F) : 0.5;  // P(clone reads 0)
  const double q0 = 1 - q1;
  // symbols: lost, (0,0), (0,1), (1,0), (1,1)
  return {1 - P, P * q1 * q1, P * q1 * q0, P * q0 * q1, P * q0 * q0};
}

inline double entropy_term(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

inline double mi_from_joint(const std::vector<std::vector<double>>& joint) {
  const std::size_t n_enc = joint.size();
  const std::size_t n_obs = joint[0].size();
  std::vector<double> po(n_obs, 0.0);
  std::vector<double> pe(n_enc, 0.0);
  for (std::size_t e = 0; e < n_enc; ++e)
    for (std::size_t o = 0; o < n_obs; ++o) {
      po[o] += joint[e][o];
      pe[e] += joint[e][o];
    }
  // I = H(E) + H(O) - H(E,O)
  double he = 0, ho = 0, heo = 0;
  for (const double p : pe) he += entropy_term(p);
  for (const double p : po) ho += entropy_term(p);
  for (std::size_t e = 0; e < n_enc; ++e)
    for (std::size_t o = 0; o < n_obs; ++o) heo += entropy_term(joint[e][o]);
  return he + ho - heo;
}

// 8 x 25 joint distribution for the cloning strategies, Z challenge
inline std::vector<std::vector<double>> cloning_joint(double F, double P) {
  std::vector<std::vector<double>> joint;
  for (const auto& enc : kEncodings) {
    const bool first_matched = enc[0] == 1;
    const auto p1 = qubit_pmf(first_matched, enc[1], F, P);
    const auto p2 = qubit_pmf(!first_matched, enc[2], F, P);
    std::vector<double> row;
    row.reserve(25);
    for (const double x : p1)
      for (const double y : p2) row.push_back(x * y / 8.0);
    joint.push_back(std::move(row));
  }
  return joint;
}

inline double mi_per_qubit_oracle(double F, double P) { return mi_from_joint(cloning_joint(F, P)) / 2; }

// drop symbols involving a lost qubit, renormalize per encoding
inline double conditional_mi_per_qubit_oracle(double F) {
  auto joint = cloning_joint(F, 1.0);  // conditioning equals the lossless channel
  return mi_from_joint(joint) / 2;
}

// honest single-bit measurements: 8 x 4 joint
inline double honest_mi_per_qubit_oracle() {
  std::vector<std::vector<double>> joint;
  for (const auto& enc : kEncodings) {
    const bool first_matched = enc[0] == 1;
    // P(report 0) per qubit: deterministic when matched, coin otherwise
    const double a0 = first_matched ? (enc[1] == 0 ? 1.0 : 0.0) : 0.5;
    const double b0 = !first_matched ? (enc[2] == 0 ? 1.0 : 0.0) : 0.5;
    joint.push_back({a0 * b0 / 8, a0 * (1 - b0) / 8, (1 - a0) * b0 / 8, (1 - a0) * (1 - b0) / 8});
  }
  return mi_from_joint(joint) / 2;
}

// frozen reference values
inline constexpr double kMiF854P13 = 0.11797255816350453;  // F=0.854, P=1/3, per qubit
inline constexpr double kCondMiF854 = 0.35282961330914686;
inline constexpr double kBinom40AcceptP197 = 0.8510682429139981;  // P(X<=10), X~Bin(40,0.197)

}  // namespace support
