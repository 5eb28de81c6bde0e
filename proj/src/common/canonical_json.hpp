// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "common/bytes.hpp"
#include "json.hpp"

namespace chainguard {

// nlohmann::json keeps object members in a std::map, so keys are emitted in
// bytewise lexicographic order. Canonical bytes are the compact dump of such
// a value with no floating point numbers anywhere in the tree.
using Json = nlohmann::json;

/// Compact, key-sorted serialization used as the preimage for every hash and
/// signature. Throws std::invalid_argument on floats or invalid UTF-8.
std::string canonical_dump(const Json& value);

std::optional<Json> parse_json(std::string_view text);

/// True when `text` parses and re-serializes to exactly the same bytes.
bool is_canonical(std::string_view text);

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads an object whose member set must be exactly `keys`.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::initializer_list<std::string_view> keys,
               std::string_view what);

  const Json& raw(std::string_view key) const;
  std::string str(std::string_view key) const;
  std::uint64_t u64(std::string_view key) const;
  bool boolean(std::string_view key) const;
  bool is_null(std::string_view key) const;
  Bytes hex(std::string_view key) const;

  template <class Fixed>
  Fixed fixed(std::string_view key) const {
    auto v = Fixed::parse(str(key));
    if (!v) fail(key, "expected " + std::to_string(Fixed::size) + "-byte hex");
    return *v;
  }

 private:
  [[noreturn]] void fail(std::string_view key, const std::string& why) const;

  const Json& obj_;
  std::string what_;
};

template <class Fixed>
Fixed fixed_from_json(const Json& j, std::string_view what) {
  if (!j.is_string()) throw DecodeError(std::string(what) + ": expected hex string");
  auto v = Fixed::parse(j.get_ref<const std::string&>());
  if (!v) throw DecodeError(std::string(what) + ": bad hex");
  return *v;
}

}  // namespace chainguard
