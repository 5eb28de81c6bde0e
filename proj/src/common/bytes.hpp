// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chainguard {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);

/// Strict decoder: lowercase hex digits only, even length.
std::optional<Bytes> from_hex(std::string_view text);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fixed-width byte string. The tag keeps addresses, digests and keys from
/// being mixed up even when they share a width.
template <std::size_t N, class Tag>
struct FixedBytes {
  static constexpr std::size_t size = N;
  std::array<std::uint8_t, N> bytes{};

  auto operator<=>(const FixedBytes&) const = default;

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }
  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  static std::optional<FixedBytes> from_view(ByteView v) {
    if (v.size() != N) return std::nullopt;
    FixedBytes out;
    for (std::size_t i = 0; i < N; ++i) out.bytes[i] = v[i];
    return out;
  }
  static std::optional<FixedBytes> parse(std::string_view text) {
    auto raw = from_hex(text);
    if (!raw) return std::nullopt;
    return from_view(*raw);
  }
};

struct AddressTag;
struct DigestTag;
struct PublicKeyTag;
struct SaltTag;

using Address = FixedBytes<20, AddressTag>;
using Digest = FixedBytes<32, DigestTag>;
using PublicKey = FixedBytes<32, PublicKeyTag>;
using Salt = FixedBytes<16, SaltTag>;

}  // namespace chainguard
