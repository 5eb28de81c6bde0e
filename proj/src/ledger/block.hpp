// Copyright 2026 The ChainGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/canonical_json.hpp"
#include "common/errors.hpp"
#include "state/event.hpp"
#include "state/world_state.hpp"
#include "wallet/transaction.hpp"

namespace chainguard::ledger {

struct BlockHeader {
  std::uint64_t height = 0;
  Digest prev_hash;
  Digest tx_root;
  Digest state_root;
  Address proposer;
  std::uint64_t timestamp = 0;  // logical tick

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  std::vector<SignedTransaction> transactions;
  std::vector<state::Event> events;

  std::uint64_t height() const { return header.height; }
  bool operator==(const Block&) const = default;
};

Json header_to_json(const BlockHeader& h);
Digest hash_header(const BlockHeader& h);

/// SHA-256 over the canonical JSON array of the transactions.
Digest compute_tx_root(std::span<const SignedTransaction> txs);

/// {"events", "hash", "header", "transactions"}; "hash" repeats
/// hash_header(header) so that a block line is self-checking.
Json block_to_json(const Block& b);
std::string block_bytes(const Block& b);

/// Strict decoder: the text must be canonical, carry exactly the expected
/// members, and its "hash" must match the header.
Result<Block> decode_block(std::string_view text);

/// Height-0 block committing to the genesis state.
Block genesis_block(const state::WorldState& genesis);

struct BuiltBlock {
  Block block;
  state::WorldState state;  // post-state
};

/// All-or-nothing: fails with InvalidTransaction (index = offending tx,
/// message = underlying error) if any transaction does not apply.
Result<BuiltBlock> build_block(const BlockHeader& prev, std::span<const SignedTransaction> txs,
                               const state::WorldState& state, const Address& proposer,
                               std::uint64_t tick);

/// Validates `b` as the successor of `prev` on top of `state` (the state
/// after `prev`): link, height, timestamp, proposer membership, tx_root,
/// deterministic re-execution of every transaction, events, state_root.
/// Returns the post-state.
Result<state::WorldState> check_block(const BlockHeader& prev, const Block& b,
                                      const state::WorldState& state);

}  // namespace chainguard::ledger
