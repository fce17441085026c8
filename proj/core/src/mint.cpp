#include "qrg/mint.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"

namespace qrg {

namespace {

const EVP_MD* evp_md(HashId h) {
  switch (h) {
    case HashId::HmacMd5:
      return EVP_md5();
    case HashId::HmacSha1:
      return EVP_sha1();
    case HashId::HmacSha256:
      return EVP_sha256();
    case HashId::HmacSha512:
      return EVP_sha512();
  }
  throw std::invalid_argument("bad HashId");
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::size_t digest_length(HashId h) {
  switch (h) {
    case HashId::HmacMd5:
      return 16;
    case HashId::HmacSha1:
      return 20;
    case HashId::HmacSha256:
      return 32;
    case HashId::HmacSha512:
      return 64;
  }
  throw std::invalid_argument("bad HashId");
}

std::string to_string(HashId h) {
  switch (h) {
    case HashId::HmacMd5:
      return "HMAC-MD5";
    case HashId::HmacSha1:
      return "HMAC-SHA1";
    case HashId::HmacSha256:
      return "HMAC-SHA256";
    case HashId::HmacSha512:
      return "HMAC-SHA512";
  }
  throw std::invalid_argument("bad HashId");
}

HashId hash_from_string(std::string_view s) {
  std::string v = lower(s);
  if (v.rfind("hmac-", 0) == 0) v = v.substr(5);
  if (v == "md5") return HashId::HmacMd5;
  if (v == "sha1") return HashId::HmacSha1;
  if (v == "sha256") return HashId::HmacSha256;
  if (v == "sha512") return HashId::HmacSha512;
  throw std::invalid_argument("unknown hash (expected md5, sha1, sha256 or sha512)");
}

void validate(const EncodingSpec& spec) {
  if (spec.salt.empty()) throw std::invalid_argument("salt must be non-empty");
  for (char c : spec.salt)
    if (c < '0' || c > '9')
      throw std::invalid_argument("salt must contain decimal digits only");
  if (spec.pairs_per_token < 1) throw std::invalid_argument("pairs_per_token must be >= 1");
  if (spec.keystream_len < spec.pairs_per_token)
    throw std::invalid_argument("keystream shorter than the token");
}

std::vector<std::uint8_t> hmac_digest(HashId h, std::string_view key, std::string_view msg) {
  std::vector<std::uint8_t> out(EVP_MAX_MD_SIZE);
  unsigned int written = 0;
  if (HMAC(evp_md(h), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<const unsigned char*>(msg.data()), msg.size(), out.data(),
           &written) == nullptr)
    throw std::runtime_error("HMAC computation failed");
  out.resize(written);
  return out;
}

std::vector<std::uint8_t> keystream(const EncodingSpec& spec, std::string_view serial) {
  validate(spec);
  std::vector<std::uint8_t> ks;
  ks.reserve(static_cast<std::size_t>(spec.keystream_len));
  for (int block = 0; ks.size() < static_cast<std::size_t>(spec.keystream_len); ++block) {
    std::string msg = std::string(serial) + ':' + std::to_string(block);
    const auto d = hmac_digest(spec.hash, spec.salt, msg);
    const std::size_t want = static_cast<std::size_t>(spec.keystream_len) - ks.size();
    ks.insert(ks.end(), d.begin(), d.begin() + static_cast<std::ptrdiff_t>(std::min(want, d.size())));
  }
  return ks;
}

std::vector<PairState> pairs_from_keystream(std::span<const std::uint8_t> bytes, int n_pairs) {
  if (n_pairs < 0 || static_cast<std::size_t>(n_pairs) > bytes.size())
    throw std::invalid_argument("keystream shorter than the requested pair count");
  std::vector<PairState> pairs;
  pairs.reserve(static_cast<std::size_t>(n_pairs));
  for (int j = 0; j < n_pairs; ++j)
    pairs.push_back(pair_from_index(bytes[static_cast<std::size_t>(j)] % kPairStates));
  return pairs;
}

Token mint_token(const EncodingSpec& spec, std::string serial) {
  const auto ks = keystream(spec, serial);
  Token t;
  t.serial = std::move(serial);
  t.hash = spec.hash;
  t.pairs = pairs_from_keystream(ks, spec.pairs_per_token);
  return t;
}

PairState predict_pair(const EncodingSpec& spec, std::string_view serial, int index) {
  validate(spec);
  if (index < 0 || index >= spec.pairs_per_token)
    throw std::out_of_range("pair index outside the token");
  const std::size_t dlen = digest_length(spec.hash);
  const std::size_t block = static_cast<std::size_t>(index) / dlen;
  const std::size_t offset = static_cast<std::size_t>(index) % dlen;
  std::string msg = std::string(serial) + ':' + std::to_string(block);
  const auto d = hmac_digest(spec.hash, spec.salt, msg);
  return pair_from_index(d[offset] % kPairStates);
}

std::string token_to_json(const Token& t) {
  nlohmann::json j;
  j["serial"] = t.serial;
  j["hash"] = to_string(t.hash);
  std::vector<int> idx;
  idx.reserve(t.pairs.size());
  for (const PairState& p : t.pairs) idx.push_back(pair_index(p));
  j["pairs"] = idx;
  return j.dump();
}

Token token_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Token t;
  t.serial = j.at("serial").get<std::string>();
  t.hash = hash_from_string(j.at("hash").get<std::string>());
  for (int k : j.at("pairs")) t.pairs.push_back(pair_from_index(k));
  return t;
}

}  // namespace qrg
