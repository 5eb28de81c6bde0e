// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "common/errors.hpp"
#include "state/event.hpp"
#include "state/world_state.hpp"

// Smart contract for users: registration and user-role assignment.
//
// Handlers validate everything first and mutate `state` only once every
// precondition holds, so a failed call leaves the state untouched. The caller
// (state::apply_transaction) has already authenticated `signer`.
namespace chainguard::scu {

/// Registers `p.user` in `p.org` with a self-assignable starting role.
Result<std::vector<state::Event>> register_user(state::WorldState& state, const Address& signer,
                                                const RegisterUser& p, state::TxContext ctx);

/// Replaces (user, org, old_role) with (user, org, new_role). The user may
/// move themselves into a self-assignable role; an org admin may assign any
/// cataloged role. An admin may also add a role outright with
/// old_role = "none".
Result<std::vector<state::Event>> update_user_role(state::WorldState& state, const Address& signer,
                                                   const UpdateUserRole& p, state::TxContext ctx);

}  // namespace chainguard::scu
