// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

#include "common/bytes.hpp"
#include "common/canonical_json.hpp"
#include "common/errors.hpp"

namespace chainguard {

using OrgId = std::string;
using RoleId = std::string;

/// Reserved role id used by admin-signed role additions (old_role = none).
inline constexpr std::string_view kNoRole = "none";
inline constexpr std::size_t kMaxIdentifierLength = 64;

/// Non-empty, at most 64 bytes, printable ASCII without spaces.
bool valid_identifier(std::string_view id);

struct Permission {
  std::string resource;
  std::string action;
  auto operator<=>(const Permission&) const = default;
};

bool valid_permission(const Permission& p);

struct RegisterUser {
  Address user;
  PublicKey public_key;
  Digest password_digest;
  OrgId org;
  RoleId requested_role;
  bool operator==(const RegisterUser&) const = default;
};

struct UpdateUserRole {
  Address user;
  OrgId org;
  RoleId old_role;
  RoleId new_role;
  bool operator==(const UpdateUserRole&) const = default;
};

struct GrantPermission {
  OrgId org;
  RoleId role;
  Permission permission;
  bool operator==(const GrantPermission&) const = default;
};

struct RevokePermission {
  OrgId org;
  RoleId role;
  Permission permission;
  bool operator==(const RevokePermission&) const = default;
};

using Payload = std::variant<RegisterUser, UpdateUserRole, GrantPermission, RevokePermission>;

std::string_view payload_type(const Payload& p);
Json payload_to_json(const Payload& p);
Payload payload_from_json(const Json& j);  // throws DecodeError

/// The signed portion of a transaction.
struct TxBody {
  Address sender;
  std::uint64_t nonce = 0;
  Payload payload;
};

struct SignedTransaction {
  Address sender;
  std::uint64_t nonce = 0;
  Payload payload;
  Bytes signature;

  TxBody body() const { return {sender, nonce, payload}; }
  bool operator==(const SignedTransaction&) const = default;
};

/// Canonical bytes of {nonce, payload, sender}: the signing preimage.
std::string signing_bytes(const TxBody& body);

Json tx_to_json(const SignedTransaction& tx);
SignedTransaction tx_from_json(const Json& j);  // throws DecodeError
Result<SignedTransaction> decode_tx(std::string_view text);

/// SHA-256 of the canonical transaction bytes, signature included.
Digest tx_id(const SignedTransaction& tx);

}  // namespace chainguard
