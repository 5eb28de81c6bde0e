// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "contracts/scu.hpp"

#include "common/crypto.hpp"

namespace chainguard::scu {

using state::Event;
using state::EventKind;
using state::UraEntry;

namespace {
bool at_capacity(const state::WorldState& s, const state::RolePolicy& pol, const OrgId& org) {
  return pol.max_holders && state::role_holders(s, org, pol.role_id) >= *pol.max_holders;
}
}  // namespace

Result<std::vector<Event>> register_user(state::WorldState& s, const Address& signer,
                                         const RegisterUser& p, state::TxContext ctx) {
  if (!valid_identifier(p.org) || !valid_identifier(p.requested_role))
    return make_error(ErrorCode::InvalidPayload, "malformed org or role id");
  if (signer != p.user) return make_error(ErrorCode::AddressMismatch, "sender is not the registering user");
  if (crypto::derive_address(p.public_key) != p.user)
    return make_error(ErrorCode::AddressMismatch, "address is not derived from the public key");
  if (auto existing = state::query_user(s, p.user); existing && existing->public_key != p.public_key)
    return make_error(ErrorCode::AddressMismatch, "public key differs from registered key");

  auto org = s.orgs.find(p.org);
  if (org == s.orgs.end()) return make_error(ErrorCode::UnknownOrg, p.org);
  if (state::registered_in(s, p.user, p.org))
    return make_error(ErrorCode::AlreadyRegistered, "user already registered in " + p.org);
  const auto* pol = org->second.role(p.requested_role);
  if (!pol) return make_error(ErrorCode::UnknownRole, p.org + "/" + p.requested_role);
  if (!pol->self_assignable)
    return make_error(ErrorCode::NotEligible, p.requested_role + " is not self-assignable");
  if (at_capacity(s, *pol, p.org)) return make_error(ErrorCode::RoleFull, p.org + "/" + p.requested_role);

  if (!s.users.contains(p.user)) {
    s.users.emplace(p.user, state::UserRecord{p.user, p.public_key, p.password_digest, ctx.height,
                                              ctx.tx_index});
  }
  s.ura.insert(UraEntry{p.user, p.org, p.requested_role});

  Event e;
  e.kind = EventKind::UserRegistered;
  e.user = p.user;
  e.org = p.org;
  e.role = p.requested_role;
  e.height = ctx.height;
  e.tx_index = ctx.tx_index;
  return std::vector<Event>{e};
}

Result<std::vector<Event>> update_user_role(state::WorldState& s, const Address& signer,
                                            const UpdateUserRole& p, state::TxContext ctx) {
  if (!valid_identifier(p.org) || !valid_identifier(p.old_role) || !valid_identifier(p.new_role))
    return make_error(ErrorCode::InvalidPayload, "malformed org or role id");
  if (p.old_role == p.new_role) return make_error(ErrorCode::InvalidPayload, "old_role equals new_role");
  if (!state::query_user(s, p.user)) return make_error(ErrorCode::NotRegistered, p.user.hex());

  auto org = s.orgs.find(p.org);
  if (org == s.orgs.end()) return make_error(ErrorCode::UnknownOrg, p.org);
  const auto* target = org->second.role(p.new_role);
  if (!target) return make_error(ErrorCode::UnknownRole, p.org + "/" + p.new_role);

  const bool by_admin = org->second.is_admin(signer);
  const bool adding = p.old_role == kNoRole;
  if (!by_admin) {
    if (signer != p.user) return make_error(ErrorCode::NotAuthorized, "only the user or an org admin may update roles");
    if (adding) return make_error(ErrorCode::NotAuthorized, "adding a role requires an org admin");
    if (!target->self_assignable)
      return make_error(ErrorCode::NotAuthorized, p.new_role + " is not self-assignable");
  }
  if (!adding && !state::has_role(s, p.user, p.org, p.old_role)) {
    return make_error(ErrorCode::NoSuchAssignment, p.org + "/" + p.old_role);
  }
  if (state::has_role(s, p.user, p.org, p.new_role))
    return make_error(ErrorCode::AlreadyAssigned, p.org + "/" + p.new_role);
  if (at_capacity(s, *target, p.org)) return make_error(ErrorCode::RoleFull, p.org + "/" + p.new_role);

  if (!adding) s.ura.erase(UraEntry{p.user, p.org, p.old_role});
  s.ura.insert(UraEntry{p.user, p.org, p.new_role});

  Event e;
  e.kind = EventKind::UserRoleUpdated;
  e.user = p.user;
  e.actor = signer;
  e.org = p.org;
  e.old_role = p.old_role;
  e.new_role = p.new_role;
  e.height = ctx.height;
  e.tx_index = ctx.tx_index;
  return std::vector<Event>{e};
}

}  // namespace chainguard::scu
