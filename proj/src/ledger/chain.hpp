// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ledger/block.hpp"

namespace chainguard::ledger {

/// Append-only sequence of blocks starting at genesis.
class Chain {
 public:
  /// Structural append: height continuity, hash link to the tip and tx_root.
  /// Errors: HeightGap, LinkMismatch, RootMismatch.
  Status append(Block block);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const Block& tip() const { return blocks_.back(); }
  const Block& at(std::uint64_t height) const { return blocks_.at(height); }

 private:
  std::vector<Block> blocks_;
};

/// Outcome of a full verification: ok, or the lowest failing height.
struct Verdict {
  bool ok = true;
  std::uint64_t height = 0;
  std::string reason;

  static Verdict pass() { return {}; }
  static Verdict failure_at(std::uint64_t h, std::string why) { return {false, h, std::move(why)}; }
};

/// Checks every hash link, tx_root, signature, event list and state_root by
/// deterministic re-execution from `genesis`.
Verdict verify_chain(const Chain& chain, const state::WorldState& genesis);

/// Same, starting from serialized block lines (one canonical block each).
/// A line that fails to decode counts as a failure at its position.
Verdict verify_serialized(std::span<const std::string> lines, const state::WorldState& genesis);

std::vector<std::string> serialize_chain(const Chain& chain);

}  // namespace chainguard::ledger
