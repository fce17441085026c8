#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrg/qstate.hpp"

namespace qrg {

enum class HashId : std::uint8_t { HmacMd5, HmacSha1, HmacSha256, HmacSha512 };

inline constexpr std::array<HashId, 4> kAllHashes = {HashId::HmacMd5, HashId::HmacSha1,
                                                     HashId::HmacSha256, HashId::HmacSha512};

std::size_t digest_length(HashId h);
std::string to_string(HashId h);              // "HMAC-MD5", ...
HashId hash_from_string(std::string_view s);  // accepts "md5" or "HMAC-MD5", any case

// Token recipe: which keyed hash expands the secret salt, and the token
// geometry. The salt is a decimal string (leading zeros significant).
struct EncodingSpec {
  HashId hash = HashId::HmacSha512;
  std::string salt;
  int keystream_len = 40;   // bytes
  int pairs_per_token = 40;
};

void validate(const EncodingSpec& spec);  // throws std::invalid_argument

// RFC 2104 HMAC with the named digest, via OpenSSL.
std::vector<std::uint8_t> hmac_digest(HashId h, std::string_view key, std::string_view msg);

// Blocks B_i = HMAC(key = salt, msg = serial ":" i) for i = 0, 1, ...,
// concatenated and truncated to keystream_len bytes.
std::vector<std::uint8_t> keystream(const EncodingSpec& spec, std::string_view serial);

// byte -> pair state via byte mod 8; seam for injecting synthetic keystreams
std::vector<PairState> pairs_from_keystream(std::span<const std::uint8_t> bytes, int n_pairs);

struct Token {
  std::string serial;
  HashId hash = HashId::HmacSha512;
  std::vector<PairState> pairs;

  friend bool operator==(const Token&, const Token&) = default;
};

Token mint_token(const EncodingSpec& spec, std::string serial);

// Pair at one position without materializing the token: computes only the
// keystream block that covers it.
PairState predict_pair(const EncodingSpec& spec, std::string_view serial, int index);

// {"serial": ..., "hash": ..., "pairs": [ints]}
std::string token_to_json(const Token& t);
Token token_from_json(std::string_view text);

}  // namespace qrg
