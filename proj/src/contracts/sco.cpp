// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "contracts/sco.hpp"

namespace chainguard::sco {

using state::Event;
using state::EventKind;
using state::PraEntry;

namespace {
template <class P>
Result<const state::OrgRecord*> authorize(const state::WorldState& s, const Address& signer,
                                          const P& p) {
  if (!valid_identifier(p.org) || !valid_identifier(p.role) || !valid_permission(p.permission))
    return make_error(ErrorCode::InvalidPayload, "malformed org, role or permission");
  auto org = s.orgs.find(p.org);
  if (org == s.orgs.end()) return make_error(ErrorCode::UnknownOrg, p.org);
  if (!org->second.is_admin(signer))
    return make_error(ErrorCode::NotAuthorized, "signer is not an admin of " + p.org);
  if (!org->second.role(p.role)) return make_error(ErrorCode::UnknownRole, p.org + "/" + p.role);
  return &org->second;
}

Event permission_event(EventKind kind, const Address& signer, const OrgId& org, const RoleId& role,
                       const Permission& perm, state::TxContext ctx) {
  Event e;
  e.kind = kind;
  e.actor = signer;
  e.org = org;
  e.role = role;
  e.permission = perm;
  e.height = ctx.height;
  e.tx_index = ctx.tx_index;
  return e;
}
}  // namespace

Result<std::vector<Event>> grant_permission(state::WorldState& s, const Address& signer,
                                            const GrantPermission& p, state::TxContext ctx) {
  auto org = authorize(s, signer, p);
  if (!org) return org.error();
  PraEntry entry{p.org, p.role, p.permission};
  if (s.pra.contains(entry)) return make_error(ErrorCode::DuplicateGrant, p.org + "/" + p.role);
  s.pra.insert(std::move(entry));
  return std::vector<Event>{
      permission_event(EventKind::PermissionGranted, signer, p.org, p.role, p.permission, ctx)};
}

Result<std::vector<Event>> revoke_permission(state::WorldState& s, const Address& signer,
                                             const RevokePermission& p, state::TxContext ctx) {
  auto org = authorize(s, signer, p);
  if (!org) return org.error();
  auto it = s.pra.find(PraEntry{p.org, p.role, p.permission});
  if (it == s.pra.end()) return make_error(ErrorCode::NotGranted, p.org + "/" + p.role);
  s.pra.erase(it);
  return std::vector<Event>{
      permission_event(EventKind::PermissionRevoked, signer, p.org, p.role, p.permission, ctx)};
}

CheckResult check_permission(const state::WorldState& s, const Address& user, const OrgId& org,
                             const Permission& permission) {
  CheckResult out;
  for (auto it = s.ura.lower_bound(state::UraEntry{user, org, {}});
       it != s.ura.end() && it->user == user && it->org == org; ++it) {
    if (s.pra.contains(PraEntry{org, it->role, permission})) out.via_roles.insert(it->role);
  }
  out.granted = !out.via_roles.empty();
  return out;
}

}  // namespace chainguard::sco
