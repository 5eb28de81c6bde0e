// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "state/event.hpp"

namespace chainguard::state {

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::UserRegistered: return "UserRegistered";
    case EventKind::UserRoleUpdated: return "UserRoleUpdated";
    case EventKind::PermissionGranted: return "PermissionGranted";
    case EventKind::PermissionRevoked: return "PermissionRevoked";
  }
  return "UserRegistered";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  for (auto k : {EventKind::UserRegistered, EventKind::UserRoleUpdated,
                 EventKind::PermissionGranted, EventKind::PermissionRevoked})
    if (event_kind_name(k) == name) return k;
  return std::nullopt;
}

Json event_to_json(const Event& e) {
  Json j{{"kind", event_kind_name(e.kind)},
         {"org", e.org},
         {"height", e.height},
         {"tx_index", e.tx_index}};
  switch (e.kind) {
    case EventKind::UserRegistered:
      j["user"] = e.user.hex();
      j["role"] = e.role;
      break;
    case EventKind::UserRoleUpdated:
      j["user"] = e.user.hex();
      j["old_role"] = e.old_role;
      j["new_role"] = e.new_role;
      j["actor"] = e.actor.hex();
      break;
    case EventKind::PermissionGranted:
    case EventKind::PermissionRevoked:
      j["role"] = e.role;
      j["permission"] = {{"resource", e.permission.resource}, {"action", e.permission.action}};
      j["actor"] = e.actor.hex();
      break;
  }
  return j;
}

Event event_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw DecodeError("event: missing kind");
  auto kind = event_kind_from_name(j["kind"].get<std::string>());
  if (!kind) throw DecodeError("event: unknown kind");
  Event e;
  e.kind = *kind;
  switch (*kind) {
    case EventKind::UserRegistered: {
      ObjectReader r(j, {"kind", "org", "height", "tx_index", "user", "role"}, "event");
      e.org = r.str("org");
      e.height = r.u64("height");
      e.tx_index = r.u64("tx_index");
      e.user = r.fixed<Address>("user");
      e.role = r.str("role");
      break;
    }
    case EventKind::UserRoleUpdated: {
      ObjectReader r(j, {"kind", "org", "height", "tx_index", "user", "old_role", "new_role", "actor"},
                     "event");
      e.org = r.str("org");
      e.height = r.u64("height");
      e.tx_index = r.u64("tx_index");
      e.user = r.fixed<Address>("user");
      e.old_role = r.str("old_role");
      e.new_role = r.str("new_role");
      e.actor = r.fixed<Address>("actor");
      break;
    }
    case EventKind::PermissionGranted:
    case EventKind::PermissionRevoked: {
      ObjectReader r(j, {"kind", "org", "height", "tx_index", "role", "permission", "actor"}, "event");
      e.org = r.str("org");
      e.height = r.u64("height");
      e.tx_index = r.u64("tx_index");
      e.role = r.str("role");
      ObjectReader p(r.raw("permission"), {"resource", "action"}, "event.permission");
      e.permission = {p.str("resource"), p.str("action")};
      e.actor = r.fixed<Address>("actor");
      break;
    }
  }
  return e;
}

}  // namespace chainguard::state
