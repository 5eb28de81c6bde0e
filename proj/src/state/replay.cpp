// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#include "state/replay.hpp"

#include "state/apply.hpp"

namespace chainguard::state {

namespace {
Error divergence(std::uint64_t height, std::string why) {
  Error e = make_error(ErrorCode::ReplayDivergence, std::move(why));
  e.height = height;
  return e;
}
}  // namespace

Result<WorldState> replay(const WorldState& genesis, const ledger::Chain& chain) {
  WorldState s = genesis;
  for (const auto& b : chain.blocks()) {
    const auto h = b.header.height;
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
      auto ev = apply_in_place(s, b.transactions[i], {h, i});
      if (!ev) {
        Error e = divergence(h, "transaction " + std::to_string(i) + " no longer applies: " + ev.error().describe());
        e.cause = ev.code();
        return e;
      }
    }
    if (state_root(s) != b.header.state_root) return divergence(h, "recomputed state_root differs");
  }
  return s;
}

}  // namespace chainguard::state
