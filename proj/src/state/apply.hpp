// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "common/errors.hpp"
#include "state/event.hpp"
#include "state/world_state.hpp"
#include "wallet/transaction.hpp"

namespace chainguard::state {

struct Applied {
  WorldState state;
  std::vector<Event> events;
};

/// Nonce the next transaction from `sender` must carry: 0 for a sender with
/// no history, otherwise the last accepted nonce + 1.
std::uint64_t expected_nonce(const WorldState& s, const Address& sender);

/// Authenticates the envelope (signature, nonce), dispatches to the contract
/// handler and bumps the sender nonce. On failure `s` is left unchanged.
Result<std::vector<Event>> apply_in_place(WorldState& s, const SignedTransaction& tx, TxContext ctx);

Result<Applied> apply_transaction(const WorldState& s, const SignedTransaction& tx, TxContext ctx);

/// Envelope-only check used at admission: well-formed signature under
/// whatever key `s` (or a RegisterUser payload) provides.
Status check_signature(const WorldState& s, const SignedTransaction& tx);

}  // namespace chainguard::state
