// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "common/canonical_json.hpp"
#include "wallet/transaction.hpp"

namespace chainguard::state {

/// Block coordinates of the transaction being applied.
struct TxContext {
  std::uint64_t height = 0;
  std::uint64_t tx_index = 0;
};

enum class EventKind { UserRegistered, UserRoleUpdated, PermissionGranted, PermissionRevoked };

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> event_kind_from_name(std::string_view name);

// Audit record. Which attributes are meaningful depends on `kind`:
//   UserRegistered     user, org, role
//   UserRoleUpdated    user, org, old_role, new_role, actor
//   PermissionGranted  org, role, permission, actor
//   PermissionRevoked  org, role, permission, actor
struct Event {
  EventKind kind = EventKind::UserRegistered;
  Address user;
  Address actor;
  OrgId org;
  RoleId role;
  RoleId old_role;
  RoleId new_role;
  Permission permission;
  std::uint64_t height = 0;
  std::uint64_t tx_index = 0;

  bool operator==(const Event&) const = default;
};

Json event_to_json(const Event& e);
Event event_from_json(const Json& j);  // throws DecodeError

}  // namespace chainguard::state
