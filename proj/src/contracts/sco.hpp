// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <vector>

#include "common/errors.hpp"
#include "state/event.hpp"
#include "state/world_state.hpp"

// Smart contract for organizations: permission-role assignment and checks.
namespace chainguard::sco {

/// Admin-only. Adds (org, role, permission) to the PRA relation.
Result<std::vector<state::Event>> grant_permission(state::WorldState& state, const Address& signer,
                                                   const GrantPermission& p, state::TxContext ctx);

/// Admin-only. Removes an existing (org, role, permission) triple.
Result<std::vector<state::Event>> revoke_permission(state::WorldState& state, const Address& signer,
                                                    const RevokePermission& p, state::TxContext ctx);

struct CheckResult {
  bool granted = false;
  std::set<RoleId> via_roles;
  bool operator==(const CheckResult&) const = default;
};

/// Read-only query; never recorded on chain.
CheckResult check_permission(const state::WorldState& state, const Address& user, const OrgId& org,
                             const Permission& permission);

}  // namespace chainguard::sco
