// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "common/bytes.hpp"

namespace chainguard::crypto {

Digest sha256(ByteView data);
inline Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView message);

/// PBKDF2 with HMAC-SHA-256 as the PRF.
Bytes pbkdf2_sha256(std::string_view password, ByteView salt, std::uint32_t iterations,
                    std::size_t length);

/// Address derivation: last 20 bytes of SHA-256(public key).
Address derive_address(const PublicKey& public_key);

/// 32-byte Ed25519 seed. Zeroed on destruction.
class SigningSeed {
 public:
  SigningSeed() = default;
  explicit SigningSeed(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}
  SigningSeed(const SigningSeed&) = default;
  SigningSeed& operator=(const SigningSeed&) = default;
  ~SigningSeed();

  const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }
  ByteView view() const { return {bytes_.data(), bytes_.size()}; }

  static std::optional<SigningSeed> from_view(ByteView v);

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

PublicKey ed25519_public_key(const SigningSeed& seed);
/// Deterministic Ed25519 signature (64 bytes).
Bytes ed25519_sign(const SigningSeed& seed, ByteView message);
/// False on any malformed input, including signatures that are not 64 bytes.
bool ed25519_verify(ByteView signature, ByteView message, const PublicKey& public_key);

inline constexpr std::size_t kSealNonceBytes = 24;
inline constexpr std::size_t kSealTagBytes = 16;

/// XSalsa20-Poly1305 authenticated encryption.
Bytes seal(ByteView key32, ByteView nonce24, ByteView plaintext);
std::optional<Bytes> open(ByteView key32, ByteView nonce24, ByteView ciphertext);

std::uint32_t crc32(std::string_view data);

void random_bytes(std::span<std::uint8_t> out);

/// Zeroes memory in a way the optimizer will not elide.
void wipe(std::span<std::uint8_t> bytes);

}  // namespace chainguard::crypto
