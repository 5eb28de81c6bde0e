// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/crypto.hpp"

#include <sodium.h>
#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace chainguard::crypto {

namespace {
void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
    return true;
  }();
  (void)ready;
}
}  // namespace

Digest sha256(ByteView data) {
  ensure_sodium();
  Digest out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView message) {
  ensure_sodium();
  std::array<std::uint8_t, 32> out{};
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  sodium_memzero(&st, sizeof st);
  return out;
}

Bytes pbkdf2_sha256(std::string_view password, ByteView salt, std::uint32_t iterations,
                    std::size_t length) {
  if (iterations == 0) throw std::invalid_argument("pbkdf2: zero iterations");
  ensure_sodium();
  const auto pw = as_bytes(password);
  Bytes out;
  out.reserve(length);
  Bytes block_salt(salt.begin(), salt.end());
  block_salt.resize(salt.size() + 4);
  for (std::uint32_t block = 1; out.size() < length; ++block) {
    block_salt[salt.size() + 0] = static_cast<std::uint8_t>(block >> 24);
    block_salt[salt.size() + 1] = static_cast<std::uint8_t>(block >> 16);
    block_salt[salt.size() + 2] = static_cast<std::uint8_t>(block >> 8);
    block_salt[salt.size() + 3] = static_cast<std::uint8_t>(block);

    // Keyed state is set up once and copied per iteration.
    crypto_auth_hmacsha256_state keyed;
    crypto_auth_hmacsha256_init(&keyed, pw.data(), pw.size());

    std::array<std::uint8_t, 32> u{};
    std::array<std::uint8_t, 32> t{};
    crypto_auth_hmacsha256_state st = keyed;
    crypto_auth_hmacsha256_update(&st, block_salt.data(), block_salt.size());
    crypto_auth_hmacsha256_final(&st, u.data());
    t = u;
    for (std::uint32_t i = 1; i < iterations; ++i) {
      st = keyed;
      crypto_auth_hmacsha256_update(&st, u.data(), u.size());
      crypto_auth_hmacsha256_final(&st, u.data());
      for (std::size_t k = 0; k < t.size(); ++k) t[k] ^= u[k];
    }
    const std::size_t take = std::min(t.size(), length - out.size());
    out.insert(out.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
    sodium_memzero(&st, sizeof st);
    sodium_memzero(&keyed, sizeof keyed);
    sodium_memzero(u.data(), u.size());
    sodium_memzero(t.data(), t.size());
  }
  return out;
}

Address derive_address(const PublicKey& public_key) {
  const Digest d = sha256(public_key.view());
  Address a;
  std::memcpy(a.bytes.data(), d.bytes.data() + (Digest::size - Address::size), Address::size);
  return a;
}

SigningSeed::~SigningSeed() { sodium_memzero(bytes_.data(), bytes_.size()); }

std::optional<SigningSeed> SigningSeed::from_view(ByteView v) {
  if (v.size() != 32) return std::nullopt;
  std::array<std::uint8_t, 32> raw{};
  std::memcpy(raw.data(), v.data(), raw.size());
  SigningSeed seed(raw);
  sodium_memzero(raw.data(), raw.size());
  return seed;
}

namespace {
struct ExpandedKey {
  unsigned char pk[crypto_sign_PUBLICKEYBYTES];
  unsigned char sk[crypto_sign_SECRETKEYBYTES];
  ~ExpandedKey() { sodium_memzero(sk, sizeof sk); }
};

void expand(const SigningSeed& seed, ExpandedKey& key) {
  ensure_sodium();
  crypto_sign_seed_keypair(key.pk, key.sk, seed.bytes().data());
}
}  // namespace

PublicKey ed25519_public_key(const SigningSeed& seed) {
  ExpandedKey key;
  expand(seed, key);
  PublicKey pk;
  std::memcpy(pk.bytes.data(), key.pk, PublicKey::size);
  return pk;
}

Bytes ed25519_sign(const SigningSeed& seed, ByteView message) {
  ExpandedKey key;
  expand(seed, key);
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.sk);
  return sig;
}

bool ed25519_verify(ByteView signature, ByteView message, const PublicKey& public_key) {
  if (signature.size() != crypto_sign_BYTES) return false;
  ensure_sodium();
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.bytes.data()) == 0;
}

Bytes seal(ByteView key32, ByteView nonce24, ByteView plaintext) {
  if (key32.size() != crypto_secretbox_KEYBYTES || nonce24.size() != crypto_secretbox_NONCEBYTES)
    throw std::invalid_argument("seal: bad key or nonce length");
  ensure_sodium();
  Bytes out(plaintext.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(out.data(), plaintext.data(), plaintext.size(), nonce24.data(),
                        key32.data());
  return out;
}

std::optional<Bytes> open(ByteView key32, ByteView nonce24, ByteView ciphertext) {
  if (key32.size() != crypto_secretbox_KEYBYTES || nonce24.size() != crypto_secretbox_NONCEBYTES ||
      ciphertext.size() < crypto_secretbox_MACBYTES)
    return std::nullopt;
  ensure_sodium();
  Bytes out(ciphertext.size() - crypto_secretbox_MACBYTES);
  if (crypto_secretbox_open_easy(out.data(), ciphertext.data(), ciphertext.size(), nonce24.data(),
                                 key32.data()) != 0)
    return std::nullopt;
  return out;
}

std::uint32_t crc32(std::string_view data) {
  uLong c = ::crc32(0L, Z_NULL, 0);
  c = ::crc32(c, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(c);
}

void random_bytes(std::span<std::uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

void wipe(std::span<std::uint8_t> bytes) { sodium_memzero(bytes.data(), bytes.size()); }

}  // namespace chainguard::crypto
