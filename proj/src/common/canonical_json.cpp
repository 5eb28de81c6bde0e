// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/canonical_json.hpp"

namespace chainguard {

namespace {
void reject_floats(const Json& v) {
  if (v.is_number_float()) throw std::invalid_argument("floating point value in canonical JSON");
  if (v.is_structured())
    for (const auto& child : v) reject_floats(child);
}
}  // namespace

std::string canonical_dump(const Json& value) {
  reject_floats(value);
  try {
    return value.dump(-1, ' ', false, Json::error_handler_t::strict);
  } catch (const Json::type_error& e) {
    throw std::invalid_argument(e.what());
  }
}

std::optional<Json> parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

bool is_canonical(std::string_view text) {
  auto parsed = parse_json(text);
  if (!parsed) return false;
  try {
    return canonical_dump(*parsed) == text;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

ObjectReader::ObjectReader(const Json& obj, std::initializer_list<std::string_view> keys,
                           std::string_view what)
    : obj_(obj), what_(what) {
  if (!obj.is_object()) throw DecodeError(what_ + ": expected object");
  if (obj.size() != keys.size()) throw DecodeError(what_ + ": unexpected member set");
  for (auto k : keys)
    if (!obj.contains(k)) throw DecodeError(what_ + ": missing member '" + std::string(k) + "'");
}

const Json& ObjectReader::raw(std::string_view key) const { return obj_.find(key).value(); }

std::string ObjectReader::str(std::string_view key) const {
  const auto& v = raw(key);
  if (!v.is_string()) fail(key, "expected string");
  return v.get<std::string>();
}

std::uint64_t ObjectReader::u64(std::string_view key) const {
  const auto& v = raw(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(key, "expected non-negative integer");
  return v.get<std::uint64_t>();
}

bool ObjectReader::boolean(std::string_view key) const {
  const auto& v = raw(key);
  if (!v.is_boolean()) fail(key, "expected boolean");
  return v.get<bool>();
}

bool ObjectReader::is_null(std::string_view key) const { return raw(key).is_null(); }

Bytes ObjectReader::hex(std::string_view key) const {
  auto v = from_hex(str(key));
  if (!v) fail(key, "expected lowercase hex");
  return *v;
}

void ObjectReader::fail(std::string_view key, const std::string& why) const {
  throw DecodeError(what_ + "." + std::string(key) + ": " + why);
}

}  // namespace chainguard
