// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/canonical_json.hpp"
#include "wallet/transaction.hpp"

namespace chainguard::state {

struct RolePolicy {
  RoleId role_id;
  bool self_assignable = false;
  std::optional<std::uint32_t> max_holders;  // unlimited when empty

  bool operator==(const RolePolicy&) const = default;
};

struct OrgRecord {
  OrgId org_id;
  std::set<Address> admins;
  std::map<RoleId, RolePolicy> role_catalog;

  bool is_admin(const Address& a) const { return admins.contains(a); }
  const RolePolicy* role(const RoleId& r) const;
  bool operator==(const OrgRecord&) const = default;
};

struct UserRecord {
  Address address;
  PublicKey public_key;
  Digest password_digest;
  std::uint64_t registered_height = 0;
  std::uint64_t registered_tx_index = 0;

  bool operator==(const UserRecord&) const = default;
};

struct UraEntry {
  Address user;
  OrgId org;
  RoleId role;
  auto operator<=>(const UraEntry&) const = default;
};

struct PraEntry {
  OrgId org;
  RoleId role;
  Permission permission;
  auto operator<=>(const PraEntry&) const = default;
};

/// Network parameters fixed at genesis. Part of the state so that the
/// genesis state root commits to them.
struct ChainParams {
  std::string chain_id;
  std::vector<Address> validators;
  bool operator==(const ChainParams&) const = default;
};

// The identity manager: everything the contracts read and write. A plain
// value; transitions copy or mutate a private working copy.
struct WorldState {
  ChainParams params;
  /// Genesis principals (org admins, operators) that may sign without being
  /// registered users.
  std::map<Address, PublicKey> accounts;
  std::map<Address, UserRecord> users;
  std::map<OrgId, OrgRecord> orgs;
  std::set<UraEntry> ura;
  std::set<PraEntry> pra;
  std::map<Address, std::uint64_t> nonces;

  bool operator==(const WorldState&) const = default;
};

Json state_to_json(const WorldState& s);
std::string state_bytes(const WorldState& s);
Digest state_root(const WorldState& s);

const UserRecord* query_user(const WorldState& s, const Address& addr);
std::map<OrgId, std::set<RoleId>> query_roles(const WorldState& s, const Address& addr);

std::size_t role_holders(const WorldState& s, const OrgId& org, const RoleId& role);
bool has_role(const WorldState& s, const Address& user, const OrgId& org, const RoleId& role);
bool registered_in(const WorldState& s, const Address& user, const OrgId& org);

/// Key that verifies transactions from `addr`, if any is on record.
std::optional<PublicKey> known_key(const WorldState& s, const Address& addr);

/// Full-scan referential-integrity check. Empty string when consistent.
std::string integrity_violation(const WorldState& s);

}  // namespace chainguard::state
