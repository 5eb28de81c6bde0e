// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "common/errors.hpp"
#include "ledger/chain.hpp"
#include "state/world_state.hpp"

namespace chainguard::state {

/// Folds every transaction of `chain` over `genesis`. Fails with
/// ReplayDivergence(height) at the first block whose recorded state_root
/// differs from the recomputed one (or whose transactions no longer apply).
/// An empty chain yields `genesis`.
Result<WorldState> replay(const WorldState& genesis, const ledger::Chain& chain);

}  // namespace chainguard::state
