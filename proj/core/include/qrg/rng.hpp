#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qrg {

// Finalizer from splitmix64; whitens seeds and stream labels.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// One stream of seeded pseudo-randomness. Draws go through the raw
// mt19937_64 output (which the standard pins down exactly) instead of
// std::uniform_* distributions, so sequences are identical across
// platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  int bit() { return static_cast<int>(eng_() >> 63); }

  // uniform in [0,1) with 53 random bits
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return u01() < p; }

  // uniform in [0,n), unbiased
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::mt19937_64 eng_;
};

// Root generator for a run: hands out independent named streams so each
// component (bank bases, cloning noise, ...) reproduces individually for
// a fixed seed.
class RootRng {
 public:
  explicit RootRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RngStream stream(std::string_view name) const {
    return RngStream(splitmix64(seed_ ^ fnv1a64(name)));
  }

  RngStream stream(std::string_view name, std::uint64_t index) const {
    return RngStream(splitmix64(splitmix64(seed_ ^ fnv1a64(name)) + index));
  }

  std::uint64_t derive(std::string_view name, std::uint64_t index = 0) const {
    return splitmix64(splitmix64(seed_ ^ fnv1a64(name)) + index);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace qrg
